#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mpwmi/error.hpp"
#include "mpwmi/polynomial.hpp"
#include "mpwmi/rational.hpp"

namespace mpwmi {

enum class Cmp { LT, LE };

/// Comparison as written in input, before canonicalization.
enum class RawCmp { LT, LE, GT, GE, EQ };

/// sum(coeffs[v] * x_v) op constant, with coprime integer coefficients,
/// at most two variables and at least one nonzero coefficient.
struct CanonicalAtom {
  std::vector<std::pair<VarId, Integer>> coeffs;  // sorted by variable
  Integer constant;
  Cmp op = Cmp::LE;

  Integer coeff(VarId v) const {
    for (const auto& [var, c] : coeffs)
      if (var == v) return c;
    return 0;
  }

  std::vector<VarId> variables() const {
    std::vector<VarId> vs;
    for (const auto& [v, c] : coeffs) vs.push_back(v);
    return vs;
  }

  /// sum(coeffs * x) - constant
  template <typename ValueFn>
  Rational residual(ValueFn&& value) const {
    Rational r = -Rational(constant);
    for (const auto& [v, c] : coeffs) r += Rational(c) * value(v);
    return r;
  }

  template <typename ValueFn>
  bool holds(ValueFn&& value) const {
    int s = sgn(residual(value));
    return op == Cmp::LT ? s < 0 : s <= 0;
  }

  friend bool operator==(const CanonicalAtom&, const CanonicalAtom&) = default;
  friend auto operator<=>(const CanonicalAtom& a, const CanonicalAtom& b) {
    if (auto c = a.coeffs.size() <=> b.coeffs.size(); c != 0) return c;
    for (std::size_t k = 0; k < a.coeffs.size(); ++k) {
      if (auto c = a.coeffs[k].first <=> b.coeffs[k].first; c != 0) return c;
      if (int c = cmp(a.coeffs[k].second, b.coeffs[k].second); c != 0) return c <=> 0;
    }
    if (int c = cmp(a.constant, b.constant); c != 0) return c <=> 0;
    return a.op <=> b.op;
  }
};

/// A literal is its (possibly negated) atom; negation is folded into the
/// canonical form: not(t <= b) is (-t < -b).
using Literal = CanonicalAtom;

inline Literal negate(const Literal& l) {
  Literal n;
  n.coeffs.reserve(l.coeffs.size());
  for (const auto& [v, c] : l.coeffs) n.coeffs.emplace_back(v, -c);
  n.constant = -l.constant;
  n.op = l.op == Cmp::LT ? Cmp::LE : Cmp::LT;
  return n;
}

/// Canonicalizes sum(coeffs) op rhs: '>' and '>=' are flipped into '<' and
/// '<=' and the coefficients are scaled to coprime integers.
inline CanonicalAtom normalize_atom(const std::vector<std::pair<VarId, Rational>>& raw, const Rational& rhs,
                                    RawCmp op) {
  if (op == RawCmp::EQ) throw Error(ErrorCode::EqualityUnsupported, "equality atoms are not supported");
  std::map<VarId, Rational> merged;
  for (const auto& [v, c] : raw) merged[v] += c;
  std::erase_if(merged, [](const auto& kv) { return kv.second == 0; });
  if (merged.empty()) throw Error(ErrorCode::ConstantAtom, "atom has no variables");
  if (merged.size() > 2)
    throw Error(ErrorCode::TooManyVariables, "atom spans " + std::to_string(merged.size()) + " variables");

  Rational k = rhs;
  Cmp cmp_op = (op == RawCmp::LT || op == RawCmp::GT) ? Cmp::LT : Cmp::LE;
  if (op == RawCmp::GT || op == RawCmp::GE) {
    for (auto& [v, c] : merged) c = -c;
    k = -k;
  }

  Integer lcm_den = k.get_den();
  for (const auto& [v, c] : merged) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), c.get_den().get_mpz_t());
  Integer g = 0;
  auto scaled = [&](const Rational& r) {
    Rational x = r * Rational(lcm_den);
    return Integer(x.get_num());
  };
  CanonicalAtom atom;
  atom.op = cmp_op;
  atom.constant = scaled(k);
  for (const auto& [v, c] : merged) atom.coeffs.emplace_back(v, scaled(c));
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), atom.constant.get_mpz_t());
  for (const auto& [v, c] : atom.coeffs) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (g > 1) {
    atom.constant /= g;
    for (auto& [v, c] : atom.coeffs) c /= g;
  }
  return atom;
}

/// Re-canonicalizes an existing atom (idempotence hook).
inline CanonicalAtom normalize_atom(const CanonicalAtom& a) {
  std::vector<std::pair<VarId, Rational>> raw;
  for (const auto& [v, c] : a.coeffs) raw.emplace_back(v, Rational(c));
  return normalize_atom(raw, Rational(a.constant), a.op == Cmp::LT ? RawCmp::LT : RawCmp::LE);
}

/// The hyperplane of an atom, oriented so its first coefficient is positive.
/// Two literals share a line exactly when they are equal or opposite sides.
struct Line {
  std::vector<std::pair<VarId, Integer>> coeffs;
  Integer constant;

  friend bool operator==(const Line&, const Line&) = default;
  friend auto operator<=>(const Line& a, const Line& b) {
    CanonicalAtom x{a.coeffs, a.constant, Cmp::LE};
    CanonicalAtom y{b.coeffs, b.constant, Cmp::LE};
    return x <=> y;
  }
};

/// Line of a literal plus the side on which the literal holds:
/// `below` means the literal is true where sum(coeffs*x) - constant < 0.
inline std::pair<Line, bool> line_of(const Literal& l) {
  Line line{l.coeffs, l.constant};
  bool below = true;
  if (sgn(line.coeffs.front().second) < 0) {
    for (auto& [v, c] : line.coeffs) c = -c;
    line.constant = -line.constant;
    below = false;
  }
  return {std::move(line), below};
}

template <typename NameFn>
std::string to_string(const CanonicalAtom& a, NameFn&& name) {
  std::string s;
  bool first = true;
  for (const auto& [v, c] : a.coeffs) {
    if (first) {
      if (c < 0) s += "-";
    } else {
      s += c < 0 ? " - " : " + ";
    }
    first = false;
    Integer mag = abs(c);
    if (mag != 1) s += mag.get_str() + "*";
    s += name(v);
  }
  s += a.op == Cmp::LT ? " < " : " <= ";
  s += a.constant.get_str();
  return s;
}

}  // namespace mpwmi
