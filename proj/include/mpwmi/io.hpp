#pragma once

// JSON problem and query files.
//
//   problem   := { "variables": [var...], "booleans"?: [name...],
//                  "clauses"?: [[literal...]...], "weights"?: [weight...] }
//   var       := { "name": str, "lower": rational, "upper": rational }
//   literal   := { "coeffs": { name: integer... }, "const": integer,
//                  "op": "<" | "<=" | ">" | ">=" }
//              | { "bool": name, "negated"?: bool }
//   weight    := { "literal": literal, "poly": [monomial...] }
//   monomial  := { "coef": rational, "powers"?: { name: int... } }
//   rational  := "p/q" | decimal string | JSON number
//
//   queries   := { "queries": [ { "clauses": [[literal...]...],
//                                 "condition"?: [[literal...]...] }... ] }
//   condition := { "clauses": [[literal...]...] }
//
// Unknown keys are rejected everywhere.

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "mpwmi/atom.hpp"
#include "mpwmi/error.hpp"
#include "mpwmi/problem.hpp"
#include "mpwmi/query.hpp"

namespace mpwmi::io {

using json = nlohmann::json;

namespace detail {

inline void only_keys(const json& j, std::initializer_list<const char*> allowed, const char* what) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, std::string(what) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw Error(ErrorCode::ParseError, "unknown key '" + key + "' in " + what);
  }
}

inline const json& required(const json& j, const char* key, const char* what) {
  auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorCode::ParseError, std::string(what) + " lacks '" + key + "'");
  return *it;
}

inline Rational rational(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return parse_rational(j.dump());
  if (j.is_number_float()) return parse_rational(j.dump());
  throw Error(ErrorCode::ParseError, "expected a rational, got " + j.dump());
}

/// Resolves variable names; Booleans are looked up separately.
struct NameTable {
  std::vector<std::string> reals;
  std::vector<std::string> booleans;

  std::optional<VarId> real(const std::string& n) const {
    for (std::size_t i = 0; i < reals.size(); ++i)
      if (reals[i] == n) return static_cast<VarId>(i);
    return std::nullopt;
  }
  std::optional<std::size_t> boolean(const std::string& n) const {
    for (std::size_t i = 0; i < booleans.size(); ++i)
      if (booleans[i] == n) return i;
    return std::nullopt;
  }
  VarId require_real(const std::string& n) const {
    if (auto v = real(n)) return *v;
    throw Error(ErrorCode::ParseError, "unknown real variable '" + n + "'");
  }
};

inline RawCmp parse_op(const std::string& op) {
  if (op == "<") return RawCmp::LT;
  if (op == "<=") return RawCmp::LE;
  if (op == ">") return RawCmp::GT;
  if (op == ">=") return RawCmp::GE;
  if (op == "=" || op == "==") return RawCmp::EQ;
  throw Error(ErrorCode::ParseError, "unknown comparison '" + op + "'");
}

inline HybridLiteral literal(const json& j, const NameTable& names) {
  if (j.is_object() && j.contains("bool")) {
    only_keys(j, {"bool", "negated"}, "Boolean literal");
    const auto name = j.at("bool").get<std::string>();
    auto idx = names.boolean(name);
    if (!idx) throw Error(ErrorCode::ParseError, "unknown Boolean '" + name + "'");
    bool neg = j.contains("negated") ? j.at("negated").get<bool>() : false;
    return BoolLiteral{*idx, neg};
  }
  only_keys(j, {"coeffs", "const", "op"}, "literal");
  std::vector<std::pair<VarId, Rational>> raw;
  for (const auto& [name, c] : required(j, "coeffs", "literal").items()) raw.emplace_back(names.require_real(name), rational(c));
  Rational rhs = j.contains("const") ? rational(j.at("const")) : Rational(0);
  return normalize_atom(raw, rhs, parse_op(required(j, "op", "literal").get<std::string>()));
}

inline Polynomial polynomial(const json& j, const NameTable& names) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "poly must be a list of monomials");
  Polynomial p;
  for (const auto& m : j) {
    only_keys(m, {"coef", "powers"}, "monomial");
    Monomial mono;
    if (m.contains("powers")) {
      for (const auto& [name, e] : m.at("powers").items()) {
        if (!e.is_number_integer() || e.get<long>() < 0) throw Error(ErrorCode::ParseError, "bad exponent");
        VarId v = names.require_real(name);
        mono = mono * Monomial::power(v, static_cast<unsigned>(e.get<long>()));
      }
    }
    p.add_term(mono, rational(required(m, "coef", "monomial")));
  }
  return p;
}

/// Lowers a clause whose literals may name Booleans of a reduced problem.
inline std::vector<Literal> real_clause(const json& j, const Problem& p) {
  NameTable names;
  for (const auto& v : p.variables) names.reals.push_back(v.name);
  std::vector<Literal> out;
  if (!j.is_array() || j.empty()) throw Error(ErrorCode::ParseError, "clause must be a non-empty list");
  for (const auto& lit : j) {
    if (lit.is_object() && lit.contains("bool")) {
      only_keys(lit, {"bool", "negated"}, "Boolean literal");
      VarId z = names.require_real(lit.at("bool").get<std::string>());
      bool neg = lit.contains("negated") ? lit.at("negated").get<bool>() : false;
      out.push_back(normalize_atom({{z, Rational(1)}}, Rational(0), neg ? RawCmp::LT : RawCmp::GT));
    } else {
      out.push_back(std::get<Literal>(literal(lit, names)));
    }
  }
  return out;
}

inline std::vector<Clause> clause_list(const json& j, const Problem& p) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "clauses must be a list");
  std::vector<Clause> out;
  for (const auto& c : j)
    if (auto clause = make_clause(real_clause(c, p))) out.push_back(std::move(*clause));
  return out;
}

}  // namespace detail

inline HybridProblem parse_hybrid(const json& j) {
  detail::only_keys(j, {"variables", "booleans", "clauses", "weights"}, "problem");
  HybridProblem h;
  detail::NameTable names;
  for (const auto& v : detail::required(j, "variables", "problem")) {
    detail::only_keys(v, {"name", "lower", "upper"}, "variable");
    RealVariable var;
    var.name = detail::required(v, "name", "variable").get<std::string>();
    if (!v.contains("lower") || !v.contains("upper") || v.at("lower").is_null() || v.at("upper").is_null())
      throw Error(ErrorCode::UnboundedDomain, "variable '" + var.name + "' needs finite lower and upper bounds");
    var.lower = detail::rational(v.at("lower"));
    var.upper = detail::rational(v.at("upper"));
    names.reals.push_back(var.name);
    h.variables.push_back(std::move(var));
  }
  if (j.contains("booleans"))
    for (const auto& b : j.at("booleans")) h.booleans.push_back(b.get<std::string>());
  names.booleans = h.booleans;
  if (j.contains("clauses")) {
    for (const auto& c : j.at("clauses")) {
      if (!c.is_array() || c.empty()) throw Error(ErrorCode::ParseError, "clause must be a non-empty list");
      std::vector<HybridLiteral> lits;
      for (const auto& l : c) lits.push_back(detail::literal(l, names));
      h.clauses.push_back(std::move(lits));
    }
  }
  if (j.contains("weights")) {
    for (const auto& w : j.at("weights")) {
      detail::only_keys(w, {"literal", "poly"}, "weight");
      h.weights.emplace_back(detail::literal(detail::required(w, "literal", "weight"), names),
                             detail::polynomial(detail::required(w, "poly", "weight"), names));
    }
  }
  return h;
}

/// Parses and reduces Booleans to reals.
inline Problem parse_problem(const json& j) { return booleans_to_reals(parse_hybrid(j)); }

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

inline Problem load_problem(const std::string& path) {
  try {
    return parse_problem(read_json_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

inline json literal_json(const Literal& l, const Problem& p) {
  json coeffs = json::object();
  for (const auto& [v, c] : l.coeffs) coeffs[p.name(v)] = c.get_str();
  return json{{"coeffs", coeffs}, {"const", l.constant.get_str()}, {"op", l.op == Cmp::LT ? "<" : "<="}};
}

inline json polynomial_json(const Polynomial& poly, const Problem& p) {
  json out = json::array();
  for (const auto& [m, c] : poly.terms()) {
    json powers = json::object();
    for (const auto& [v, e] : m.powers()) powers[p.name(v)] = e;
    out.push_back(json{{"coef", to_string(c)}, {"powers", powers}});
  }
  return out;
}

inline json clauses_json(const std::vector<Clause>& clauses, const Problem& p) {
  json out = json::array();
  for (const auto& c : clauses) {
    json lits = json::array();
    for (const auto& l : c.literals) lits.push_back(literal_json(l, p));
    out.push_back(std::move(lits));
  }
  return out;
}

inline json problem_json(const Problem& p) {
  json vars = json::array();
  for (const auto& v : p.variables)
    vars.push_back(json{{"name", v.name}, {"lower", to_string(v.lower)}, {"upper", to_string(v.upper)}});
  json weights = json::array();
  for (const auto& w : p.weights)
    weights.push_back(json{{"literal", literal_json(w.literal, p)}, {"poly", polynomial_json(w.weight, p)}});
  return json{{"variables", vars}, {"clauses", clauses_json(p.clauses, p)}, {"weights", weights}};
}

/// Parses a query file against a (reduced) problem.
inline std::vector<Query> parse_queries(const json& j, const Problem& p) {
  detail::only_keys(j, {"queries"}, "query file");
  std::vector<Query> out;
  for (const auto& q : detail::required(j, "queries", "query file")) {
    detail::only_keys(q, {"clauses", "condition"}, "query");
    Query query;
    query.clauses = detail::clause_list(detail::required(q, "clauses", "query"), p);
    if (q.contains("condition")) query.condition = detail::clause_list(q.at("condition"), p);
    out.push_back(std::move(query));
  }
  return out;
}

inline std::vector<Clause> parse_condition(const json& j, const Problem& p) {
  detail::only_keys(j, {"clauses"}, "condition file");
  return detail::clause_list(detail::required(j, "clauses", "condition file"), p);
}

inline json queries_json(const std::vector<Query>& qs, const Problem& p) {
  json arr = json::array();
  for (const auto& q : qs) {
    json o{{"clauses", clauses_json(q.clauses, p)}};
    if (!q.condition.empty()) o["condition"] = clauses_json(q.condition, p);
    arr.push_back(std::move(o));
  }
  return json{{"queries", arr}};
}

}  // namespace mpwmi::io
