#pragma once

// Uniform Monte Carlo estimate of WMI over the bounding box.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "mpwmi/problem.hpp"

namespace mpwmi::oracle {

struct McEstimate {
  double mean = 0;
  double std_error = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

namespace detail {

struct FastLiteral {
  std::vector<std::pair<VarId, double>> coeffs;
  double constant;
  bool strict;

  bool holds(const std::vector<double>& x) const {
    double r = -constant;
    for (const auto& [v, a] : coeffs) r += a * x[v];
    return strict ? r < 0 : r <= 0;
  }
};

struct FastPolynomial {
  std::vector<std::pair<double, std::vector<std::pair<VarId, unsigned>>>> terms;

  double operator()(const std::vector<double>& x) const {
    double sum = 0;
    for (const auto& [c, powers] : terms) {
      double t = c;
      for (const auto& [v, e] : powers) t *= std::pow(x[v], static_cast<double>(e));
      sum += t;
    }
    return sum;
  }
};

inline FastLiteral fast(const Literal& l) {
  FastLiteral f{{}, l.constant.get_d(), l.op == Cmp::LT};
  for (const auto& [v, a] : l.coeffs) f.coeffs.emplace_back(v, a.get_d());
  return f;
}

inline FastPolynomial fast(const Polynomial& p) {
  FastPolynomial f;
  for (const auto& [m, c] : p.terms()) f.terms.emplace_back(c.get_d(), m.powers());
  return f;
}

}  // namespace detail

inline constexpr std::uint64_t mc_block_size = 4096;

/// Samples are drawn in fixed blocks, each from its own generator seeded by
/// (seed, block index), so the estimate does not depend on how blocks are
/// scheduled.
inline McEstimate mc_wmi(const Problem& p, std::uint64_t samples, std::uint64_t seed) {
  std::vector<std::vector<detail::FastLiteral>> clauses;
  for (const auto& c : p.clauses) {
    std::vector<detail::FastLiteral> lits;
    for (const auto& l : c.literals) lits.push_back(detail::fast(l));
    clauses.push_back(std::move(lits));
  }
  std::vector<std::pair<detail::FastLiteral, detail::FastPolynomial>> weights;
  for (const auto& w : p.weights) weights.emplace_back(detail::fast(w.literal), detail::fast(w.weight));
  std::vector<double> lo, width;
  for (const auto& v : p.variables) {
    lo.push_back(v.lower.get_d());
    width.push_back(Rational(v.upper - v.lower).get_d());
  }
  const double volume = p.box_volume().get_d();

  double sum = 0, sum_sq = 0;
  std::vector<double> x(p.size());
  for (std::uint64_t block = 0; block * mc_block_size < samples; ++block) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::uint64_t count = std::min(mc_block_size, samples - block * mc_block_size);
    double block_sum = 0, block_sq = 0;
    for (std::uint64_t s = 0; s < count; ++s) {
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = lo[i] + width[i] * unit(rng);
      bool sat = true;
      for (const auto& c : clauses) {
        bool any = false;
        for (const auto& l : c) any = any || l.holds(x);
        if (!any) {
          sat = false;
          break;
        }
      }
      if (!sat) continue;
      double w = volume;
      for (const auto& [lit, poly] : weights)
        if (lit.holds(x)) w *= poly(x);
      block_sum += w;
      block_sq += w * w;
    }
    sum += block_sum;
    sum_sq += block_sq;
  }
  McEstimate est;
  est.samples = samples;
  est.seed = seed;
  const double n = static_cast<double>(samples);
  est.mean = sum / n;
  const double var = samples > 1 ? std::max(0.0, (sum_sq - n * est.mean * est.mean) / (n - 1)) : 0.0;
  est.std_error = std::sqrt(var / n);
  return est;
}

}  // namespace mpwmi::oracle
