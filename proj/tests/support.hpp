#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "mpwmi/mpwmi.hpp"

namespace testing_support {

using mpwmi::Rational;

inline Rational q(const char* text) { return mpwmi::parse_rational(text); }

inline mpwmi::Problem problem_from(const std::string& text) {
  return mpwmi::io::parse_problem(nlohmann::json::parse(text));
}

inline mpwmi::Problem shipped(const std::string& file) {
  return mpwmi::io::load_problem(std::string(MPWMI_PROBLEMS) + "/" + file);
}

inline std::vector<mpwmi::Query> queries_from(const std::string& text, const mpwmi::Problem& p) {
  return mpwmi::io::parse_queries(nlohmann::json::parse(text), p);
}

inline mpwmi::Query single_query(const std::string& clauses, const mpwmi::Problem& p) {
  return queries_from(R"({"queries": [{"clauses": )" + clauses + "}]}", p).front();
}

/// UniPoly from coefficients, constant term first.
inline mpwmi::UniPoly uni(std::vector<Rational> coeffs) { return mpwmi::UniPoly(std::move(coeffs)); }

inline mpwmi::Piece piece(const char* lo, const char* hi, std::vector<Rational> coeffs) {
  return mpwmi::Piece{q(lo), q(hi), uni(std::move(coeffs))};
}

inline const char* triangle = R"({
  "variables": [{"name": "x", "lower": 0, "upper": 1}, {"name": "y", "lower": 0, "upper": 1}],
  "clauses": [[{"coeffs": {"y": 1, "x": -1}, "const": 0, "op": "<="}]]
})";

inline const char* unit_square = R"({
  "variables": [{"name": "x", "lower": 0, "upper": 1}, {"name": "y", "lower": 0, "upper": 1}]
})";

inline mpwmi::bench::GenConfig gen(mpwmi::bench::Structure s, std::size_t n, std::uint64_t seed) {
  mpwmi::bench::GenConfig c;
  c.structure = s;
  c.n = n;
  c.seed = seed;
  return c;
}

}  // namespace testing_support
