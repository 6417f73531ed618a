#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "mpwmi/atom.hpp"
#include "mpwmi/error.hpp"
#include "mpwmi/polynomial.hpp"
#include "mpwmi/rational.hpp"

namespace mpwmi {

struct RealVariable {
  std::string name;
  Rational lower;
  Rational upper;

  friend bool operator==(const RealVariable&, const RealVariable&) = default;
};

/// Disjunction of literals over at most two variables, in canonical order.
struct Clause {
  std::vector<Literal> literals;

  std::set<VarId> variables() const {
    std::set<VarId> vs;
    for (const auto& l : literals)
      for (const auto& [v, c] : l.coeffs) vs.insert(v);
    return vs;
  }

  template <typename ValueFn>
  bool holds(ValueFn&& value) const {
    return std::any_of(literals.begin(), literals.end(), [&](const Literal& l) { return l.holds(value); });
  }

  friend bool operator==(const Clause&, const Clause&) = default;
};

/// Sorts and deduplicates; returns nullopt for a tautology (l or not l).
inline std::optional<Clause> make_clause(std::vector<Literal> literals) {
  if (literals.empty()) throw Error(ErrorCode::ParseError, "empty clause");
  std::sort(literals.begin(), literals.end());
  literals.erase(std::unique(literals.begin(), literals.end()), literals.end());
  for (const auto& l : literals)
    if (std::binary_search(literals.begin(), literals.end(), negate(l))) return std::nullopt;
  Clause c{std::move(literals)};
  if (c.variables().size() > 2) throw Error(ErrorCode::TooManyVariables, "clause spans more than two variables");
  return c;
}

struct WeightedLiteral {
  Literal literal;
  Polynomial weight;

  /// Variables of the literal together with those of its weight.
  std::set<VarId> scope() const {
    std::set<VarId> vs = weight.variables();
    for (const auto& [v, c] : literal.coeffs) vs.insert(v);
    return vs;
  }

  friend bool operator==(const WeightedLiteral&, const WeightedLiteral&) = default;
};

/// Real-only WMI instance: bounded variables, CNF clauses and per-literal
/// polynomial weights. Literals without an entry weigh 1.
struct Problem {
  std::vector<RealVariable> variables;
  std::vector<Clause> clauses;
  std::vector<WeightedLiteral> weights;  // sorted by literal, unique

  std::size_t size() const { return variables.size(); }

  std::optional<VarId> find(const std::string& name) const {
    for (std::size_t i = 0; i < variables.size(); ++i)
      if (variables[i].name == name) return static_cast<VarId>(i);
    return std::nullopt;
  }

  const std::string& name(VarId v) const { return variables.at(v).name; }

  auto namer() const {
    return [this](VarId v) { return variables.at(v).name; };
  }

  Rational box_volume() const {
    Rational vol = 1;
    for (const auto& v : variables) vol *= v.upper - v.lower;
    return vol;
  }

  friend bool operator==(const Problem&, const Problem&) = default;
};

/// Checks the structural invariants that every consumer relies on.
inline void validate(Problem& p) {
  std::set<std::string> names;
  for (const auto& v : p.variables) {
    if (!names.insert(v.name).second) throw Error(ErrorCode::NameCollision, "duplicate variable '" + v.name + "'");
    if (!(v.lower < v.upper))
      throw Error(ErrorCode::ParseError, "variable '" + v.name + "' needs lower < upper");
  }
  const auto n = static_cast<VarId>(p.variables.size());
  auto check_vars = [&](const std::set<VarId>& vs, const char* what) {
    for (VarId v : vs)
      if (v >= n) throw Error(ErrorCode::ParseError, std::string(what) + " references an unknown variable");
    if (vs.size() > 2) throw Error(ErrorCode::TooManyVariables, std::string(what) + " spans more than two variables");
  };
  for (const auto& c : p.clauses) check_vars(c.variables(), "clause");
  std::sort(p.weights.begin(), p.weights.end(),
            [](const WeightedLiteral& a, const WeightedLiteral& b) { return a.literal < b.literal; });
  for (std::size_t k = 0; k < p.weights.size(); ++k) {
    check_vars(p.weights[k].scope(), "weighted literal");
    if (k > 0 && p.weights[k].literal == p.weights[k - 1].literal)
      throw Error(ErrorCode::ParseError, "literal weighted twice");
  }
  std::erase_if(p.weights, [](const WeightedLiteral& w) { return w.weight == Polynomial::constant(1); });
}

/// Literal of the pre-reduction form: either an LRA literal or a Boolean.
struct BoolLiteral {
  std::size_t index;  // into HybridProblem::booleans
  bool negated = false;

  friend bool operator==(const BoolLiteral&, const BoolLiteral&) = default;
};

using HybridLiteral = std::variant<Literal, BoolLiteral>;

/// Problem as read from a file, possibly mentioning Boolean variables.
/// Polynomials refer to real variables only; weights of Boolean literals
/// must be constants.
struct HybridProblem {
  std::vector<RealVariable> variables;
  std::vector<std::string> booleans;
  std::vector<std::vector<HybridLiteral>> clauses;
  std::vector<std::pair<HybridLiteral, Polynomial>> weights;
};

/// Replaces every Boolean B by a fresh real variable (named B) bounded to
/// [-1, 1]: B becomes (B > 0) and not-B becomes (B < 0). Model counts and
/// weighted integrals are preserved since both half-boxes have volume 1.
inline Problem booleans_to_reals(const HybridProblem& h) {
  Problem p;
  p.variables = h.variables;
  std::set<std::string> reals;
  for (const auto& v : h.variables) reals.insert(v.name);
  std::set<std::string> seen;
  for (const auto& b : h.booleans) {
    if (reals.contains(b) || !seen.insert(b).second)
      throw Error(ErrorCode::NameCollision, "Boolean '" + b + "' collides with another variable");
    p.variables.push_back(RealVariable{b, Rational(-1), Rational(1)});
  }
  const auto first_bool = static_cast<VarId>(h.variables.size());

  auto lower = [&](const HybridLiteral& l) -> Literal {
    if (const auto* lra = std::get_if<Literal>(&l)) return *lra;
    const auto& b = std::get<BoolLiteral>(l);
    if (b.index >= h.booleans.size()) throw Error(ErrorCode::ParseError, "unknown Boolean literal");
    const VarId z = first_bool + static_cast<VarId>(b.index);
    return normalize_atom({{z, Rational(1)}}, Rational(0), b.negated ? RawCmp::LT : RawCmp::GT);
  };

  for (const auto& clause : h.clauses) {
    std::vector<Literal> lits;
    for (const auto& l : clause) lits.push_back(lower(l));
    if (auto c = make_clause(std::move(lits))) p.clauses.push_back(std::move(*c));
  }
  for (const auto& [lit, poly] : h.weights) {
    if (std::holds_alternative<BoolLiteral>(lit) && !poly.is_constant())
      throw Error(ErrorCode::ParseError, "Boolean literal weights must be constants");
    p.weights.push_back(WeightedLiteral{lower(lit), poly});
  }
  validate(p);
  return p;
}

}  // namespace mpwmi
