#pragma once

// Seeded random tree-structured problems (STAR, SNOW, PATH) and random
// conforming queries over them.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mpwmi/atom.hpp"
#include "mpwmi/error.hpp"
#include "mpwmi/primal_graph.hpp"
#include "mpwmi/problem.hpp"
#include "mpwmi/query.hpp"

namespace mpwmi::bench {

enum class Structure { Star, Snow, Path };

inline std::string to_string(Structure s) {
  switch (s) {
    case Structure::Star: return "STAR";
    case Structure::Snow: return "SNOW";
    case Structure::Path: return "PATH";
  }
  return "?";
}

inline Structure parse_structure(const std::string& s) {
  if (s == "STAR" || s == "star") return Structure::Star;
  if (s == "SNOW" || s == "snow") return Structure::Snow;
  if (s == "PATH" || s == "path") return Structure::Path;
  throw Error(ErrorCode::InvalidConfig, "unknown structure '" + s + "'");
}

struct GenConfig {
  Structure structure = Structure::Path;
  std::size_t n = 5;
  std::uint64_t seed = 0;
  std::size_t atoms_per_edge = 1;     // clauses per edge
  unsigned weight_degree = 1;         // degree of q in the weight q^2 + 1/10
  double weighted_fraction = 0.5;     // share of distinct literals that get a weight
  int bounds_range = 2;               // bounds are integers in [-range, range]
};

inline void validate(const GenConfig& cfg) {
  if (cfg.n < 1) throw Error(ErrorCode::InvalidConfig, "n must be at least 1");
  if (cfg.atoms_per_edge < 1) throw Error(ErrorCode::InvalidConfig, "atoms per edge must be at least 1");
  if (!(cfg.weighted_fraction >= 0 && cfg.weighted_fraction <= 1))
    throw Error(ErrorCode::InvalidConfig, "weighted fraction must lie in [0, 1]");
  if (cfg.bounds_range < 1) throw Error(ErrorCode::InvalidConfig, "bounds range must be at least 1");
}

/// Tree edges (parent, child) of the skeleton.
inline std::vector<std::pair<VarId, VarId>> skeleton(Structure s, std::size_t n) {
  std::vector<std::pair<VarId, VarId>> edges;
  for (VarId i = 1; i < n; ++i) {
    switch (s) {
      case Structure::Star: edges.emplace_back(0, i); break;
      case Structure::Path: edges.emplace_back(i - 1, i); break;
      case Structure::Snow: edges.emplace_back((i - 1) / 3, i); break;
    }
  }
  return edges;
}

namespace detail {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen_); }
  bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(gen_) < p; }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

/// A point strictly inside [lo, hi] on an eighth-grid.
inline Rational interior_point(Rng& rng, const RealVariable& v) {
  return v.lower + (v.upper - v.lower) * Rational(rng.integer(1, 7), 8);
}

/// Random literal over `vars` whose line passes through an interior point.
/// With a witness, the literal holds strictly at it.
inline Literal random_literal(Rng& rng, const Problem& p, const std::vector<VarId>& vars,
                              const std::vector<Rational>* witness = nullptr) {
  for (;;) {
    std::vector<std::pair<VarId, Rational>> coeffs;
    Rational rhs = 0, at_witness = 0;
    for (VarId v : vars) {
      long a = 0;
      while (a == 0) a = rng.integer(-3, 3);
      coeffs.emplace_back(v, Rational(a));
      rhs += a * interior_point(rng, p.variables[v]);
      if (witness) at_witness += a * (*witness)[v];
    }
    const bool strict = rng.chance(0.5);
    if (!witness) {
      const bool less = rng.chance(0.5);
      return normalize_atom(coeffs, rhs, less ? (strict ? RawCmp::LT : RawCmp::LE) : (strict ? RawCmp::GT : RawCmp::GE));
    }
    if (at_witness == rhs) continue;
    const bool less = at_witness < rhs;
    return normalize_atom(coeffs, rhs, less ? (strict ? RawCmp::LT : RawCmp::LE) : (strict ? RawCmp::GT : RawCmp::GE));
  }
}

/// q^2 + 1/10 with q a random polynomial of the given degree over `vars`.
inline Polynomial random_weight(Rng& rng, const std::vector<VarId>& vars, unsigned degree) {
  Polynomial q;
  for (unsigned i = 0; i <= degree; ++i) {
    for (unsigned j = 0; i + j <= degree; ++j) {
      if (j > 0 && vars.size() < 2) break;
      Monomial m = Monomial::power(vars[0], i);
      if (j > 0) m = m * Monomial::power(vars[1], j);
      q.add_term(m, Rational(rng.integer(-2, 2), static_cast<unsigned long>(rng.integer(1, 2))));
    }
  }
  return q * q + Polynomial::constant(Rational(1, 10));
}

}  // namespace detail

/// Deterministic in the config. Every edge of the skeleton carries
/// `atoms_per_edge` clauses of one or two literals, each mentioning both
/// endpoints, so the primal graph equals the skeleton. A hidden witness
/// point satisfies the first literal of every clause strictly, so Z > 0.
inline Problem generate(const GenConfig& cfg) {
  validate(cfg);
  detail::Rng rng(cfg.seed);
  Problem p;
  for (std::size_t i = 0; i < cfg.n; ++i) {
    const long lo = rng.integer(-cfg.bounds_range, cfg.bounds_range - 1);
    const long hi = rng.integer(lo + 1, cfg.bounds_range);
    p.variables.push_back(RealVariable{"x" + std::to_string(i), Rational(lo), Rational(hi)});
  }
  std::vector<Rational> witness;
  for (const auto& v : p.variables) witness.push_back(v.lower + (v.upper - v.lower) * Rational(rng.integer(1, 15), 16));
  std::vector<Literal> literals;
  for (const auto& [a, b] : skeleton(cfg.structure, cfg.n)) {
    for (std::size_t k = 0; k < cfg.atoms_per_edge; ++k) {
      std::vector<Literal> lits{detail::random_literal(rng, p, {a, b}, &witness)};
      if (rng.chance(0.5)) lits.push_back(detail::random_literal(rng, p, {a, b}));
      literals.insert(literals.end(), lits.begin(), lits.end());
      if (auto c = make_clause(std::move(lits))) p.clauses.push_back(std::move(*c));
    }
  }
  std::sort(literals.begin(), literals.end());
  literals.erase(std::unique(literals.begin(), literals.end()), literals.end());
  std::shuffle(literals.begin(), literals.end(), rng.engine());
  const auto weighted = static_cast<std::size_t>(cfg.weighted_fraction * static_cast<double>(literals.size()) + 0.5);
  for (std::size_t k = 0; k < weighted && k < literals.size(); ++k)
    p.weights.push_back(WeightedLiteral{literals[k], detail::random_weight(rng, literals[k].variables(), cfg.weight_degree)});
  validate(p);
  return p;
}

/// Univariate interval queries (lo <= x <= hi) and half-plane queries over
/// existing edges, alternating.
inline std::vector<Query> generate_queries(const Problem& p, std::size_t count, std::uint64_t seed) {
  detail::Rng rng(seed);
  const auto edges = build_primal_graph(p).edges;
  std::vector<Query> out;
  while (out.size() < count) {
    Query q;
    if (out.size() % 2 == 0 || edges.empty()) {
      const auto v = static_cast<VarId>(rng.integer(0, static_cast<long>(p.size()) - 1));
      Rational a = detail::interior_point(rng, p.variables[v]);
      Rational b = detail::interior_point(rng, p.variables[v]);
      if (b < a) std::swap(a, b);
      if (a == b) continue;
      q.clauses.push_back(*make_clause({normalize_atom({{v, Rational(1)}}, a, RawCmp::GE)}));
      q.clauses.push_back(*make_clause({normalize_atom({{v, Rational(1)}}, b, RawCmp::LE)}));
    } else {
      const auto& [a, b] = edges[static_cast<std::size_t>(rng.integer(0, static_cast<long>(edges.size()) - 1))];
      q.clauses.push_back(*make_clause({detail::random_literal(rng, p, {a, b})}));
    }
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace mpwmi::bench
