#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "mpwmi/polynomial.hpp"
#include "mpwmi/rational.hpp"

namespace mpwmi {

/// Dense univariate polynomial; coeffs()[k] multiplies x^k. Trailing zeros
/// are always trimmed, so the zero polynomial has no coefficients.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

  static UniPoly constant(const Rational& k) { return UniPoly(std::vector<Rational>{k}); }
  static UniPoly monomial(unsigned degree, const Rational& k) {
    std::vector<Rational> c(degree + 1);
    c[degree] = k;
    return UniPoly(std::move(c));
  }
  /// a*x + b
  static UniPoly linear(const Rational& a, const Rational& b) { return UniPoly(std::vector<Rational>{b, a}); }

  /// Projects a polynomial in at most the single variable `v`.
  static UniPoly from_polynomial(const Polynomial& p, VarId v) {
    std::vector<Rational> c(p.degree_in(v) + 1);
    for (const auto& [m, coef] : p.terms()) {
      if (m.powers().size() > 1 || (!m.is_constant() && m.powers().front().first != v))
        throw Error(ErrorCode::TooManyVariables, "polynomial is not univariate in the requested variable");
      c[m.exponent(v)] += coef;
    }
    return UniPoly(std::move(c));
  }

  Polynomial to_polynomial(VarId v) const {
    Polynomial p;
    for (std::size_t k = 0; k < c_.size(); ++k) p.add_term(Monomial::power(v, static_cast<unsigned>(k)), c_[k]);
    return p;
  }

  const std::vector<Rational>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  /// Degree of the zero polynomial is reported as 0.
  unsigned degree() const { return c_.empty() ? 0 : static_cast<unsigned>(c_.size() - 1); }

  Rational operator()(const Rational& x) const {
    Rational r = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      r *= x;
      r += *it;
    }
    return r;
  }

  double evaluate(double x) const {
    double r = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + it->get_d();
    return r;
  }

  UniPoly& operator+=(const UniPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }

  UniPoly& operator-=(const UniPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }

  UniPoly& operator*=(const Rational& k) {
    if (k == 0) {
      c_.clear();
    } else {
      for (auto& x : c_) x *= k;
    }
    return *this;
  }

  friend UniPoly operator+(UniPoly a, const UniPoly& b) { return a += b; }
  friend UniPoly operator-(UniPoly a, const UniPoly& b) { return a -= b; }
  friend UniPoly operator*(UniPoly a, const Rational& k) { return a *= k; }

  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
    Rational tmp;
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) {
        mpq_mul(tmp.get_mpq_t(), a.c_[i].get_mpq_t(), b.c_[j].get_mpq_t());
        c[i + j] += tmp;
      }
    }
    return UniPoly(std::move(c));
  }

  UniPoly antiderivative() const {
    if (c_.empty()) return {};
    std::vector<Rational> c(c_.size() + 1);
    for (std::size_t k = 0; k < c_.size(); ++k) c[k + 1] = c_[k] / Rational(static_cast<unsigned long>(k + 1));
    return UniPoly(std::move(c));
  }

  UniPoly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<Rational> c(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) c[k - 1] = c_[k] * Rational(static_cast<unsigned long>(k));
    return UniPoly(std::move(c));
  }

  /// p(a*x + b)
  UniPoly compose_linear(const Rational& a, const Rational& b) const {
    UniPoly r;
    const UniPoly lin = linear(a, b);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      r = r * lin;
      r += constant(*it);
    }
    return r;
  }

  /// Exact definite integral over [lo, hi].
  Rational integrate(const Rational& lo, const Rational& hi) const {
    UniPoly F = antiderivative();
    return F(hi) - F(lo);
  }

  friend bool operator==(const UniPoly&, const UniPoly&) = default;

  std::string to_string(const std::string& var = "x") const {
    return to_polynomial(0).to_string([&](VarId) { return var; });
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<Rational> c_;
};

/// Dense bivariate polynomial in a target variable t and an integration
/// variable s: sum over k of coeff(k)(t) * s^k.
class BiPoly {
 public:
  BiPoly() = default;

  static BiPoly constant(const Rational& k) {
    BiPoly b;
    b.by_s_.push_back(UniPoly::constant(k));
    b.trim();
    return b;
  }

  /// Lifts a polynomial over {t, s} (either may be absent).
  static BiPoly from_polynomial(const Polynomial& p, VarId t, VarId s) {
    BiPoly b;
    b.by_s_.resize(p.degree_in(s) + 1);
    std::vector<std::vector<Rational>> dense(b.by_s_.size(), std::vector<Rational>(p.degree_in(t) + 1));
    for (const auto& [m, c] : p.terms()) {
      for (const auto& [v, e] : m.powers())
        if (v != t && v != s) throw Error(ErrorCode::TooManyVariables, "polynomial leaves the factor scope");
      dense[m.exponent(s)][m.exponent(t)] += c;
    }
    for (std::size_t k = 0; k < dense.size(); ++k) b.by_s_[k] = UniPoly(std::move(dense[k]));
    b.trim();
    return b;
  }

  /// Lifts a polynomial in t alone.
  static BiPoly in_t(UniPoly p) {
    BiPoly b;
    b.by_s_.push_back(std::move(p));
    b.trim();
    return b;
  }

  /// Lifts a polynomial in s alone.
  static BiPoly in_s(const UniPoly& p) {
    BiPoly b;
    for (const auto& c : p.coeffs()) b.by_s_.push_back(UniPoly::constant(c));
    b.trim();
    return b;
  }

  bool is_zero() const { return by_s_.empty(); }
  const std::vector<UniPoly>& by_s() const { return by_s_; }

  friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
    BiPoly out;
    if (a.is_zero() || b.is_zero()) return out;
    out.by_s_.resize(a.by_s_.size() + b.by_s_.size() - 1);
    for (std::size_t i = 0; i < a.by_s_.size(); ++i)
      for (std::size_t j = 0; j < b.by_s_.size(); ++j) out.by_s_[i + j] += a.by_s_[i] * b.by_s_[j];
    out.trim();
    return out;
  }

  /// Multiplies by a polynomial in s only, cheaper than the general product.
  BiPoly times_s_poly(const UniPoly& p) const {
    BiPoly out;
    if (is_zero() || p.is_zero()) return out;
    const auto& pc = p.coeffs();
    out.by_s_.resize(by_s_.size() + pc.size() - 1);
    for (std::size_t i = 0; i < by_s_.size(); ++i)
      for (std::size_t j = 0; j < pc.size(); ++j)
        if (pc[j] != 0) out.by_s_[i + j] += by_s_[i] * pc[j];
    out.trim();
    return out;
  }

  BiPoly antiderivative_s() const {
    BiPoly out;
    if (is_zero()) return out;
    out.by_s_.resize(by_s_.size() + 1);
    for (std::size_t k = 0; k < by_s_.size(); ++k)
      out.by_s_[k + 1] = by_s_[k] * Rational(1, static_cast<unsigned long>(k + 1));
    out.trim();
    return out;
  }

  /// Value at s = b as a polynomial in t.
  UniPoly at_s(const Rational& b) const {
    UniPoly r;
    for (auto it = by_s_.rbegin(); it != by_s_.rend(); ++it) {
      r *= b;
      r += *it;
    }
    return r;
  }

  /// Value at s = bound(t) as a polynomial in t.
  UniPoly at_s(const LinearBound& bound) const {
    if (bound.is_constant()) return at_s(bound.intercept);
    UniPoly r;
    const UniPoly lin = UniPoly::linear(bound.slope, bound.intercept);
    for (auto it = by_s_.rbegin(); it != by_s_.rend(); ++it) {
      r = r * lin;
      r += *it;
    }
    return r;
  }

  Rational evaluate(const Rational& t, const Rational& s) const {
    Rational r = 0;
    for (auto it = by_s_.rbegin(); it != by_s_.rend(); ++it) {
      r *= s;
      r += (*it)(t);
    }
    return r;
  }

  friend bool operator==(const BiPoly&, const BiPoly&) = default;

 private:
  void trim() {
    while (!by_s_.empty() && by_s_.back().is_zero()) by_s_.pop_back();
  }

  std::vector<UniPoly> by_s_;
};

}  // namespace mpwmi
