#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mpwmi/error.hpp"
#include "mpwmi/rational.hpp"

namespace mpwmi {

/// Dense index of a real variable inside a Problem.
using VarId = std::uint32_t;

/// Product of variable powers, sorted by variable, no zero exponents.
class Monomial {
 public:
  Monomial() = default;

  static Monomial power(VarId v, unsigned exponent) {
    Monomial m;
    if (exponent > 0) m.powers_.emplace_back(v, exponent);
    return m;
  }

  const std::vector<std::pair<VarId, unsigned>>& powers() const { return powers_; }

  unsigned exponent(VarId v) const {
    for (const auto& [var, e] : powers_)
      if (var == v) return e;
    return 0;
  }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& p : powers_) d += p.second;
    return d;
  }

  bool is_constant() const { return powers_.empty(); }

  /// Returns the monomial with `v` raised to `exponent` (0 removes it).
  Monomial with_exponent(VarId v, unsigned exponent) const {
    Monomial m;
    bool placed = false;
    for (const auto& [var, e] : powers_) {
      if (var == v) {
        if (exponent > 0) m.powers_.emplace_back(v, exponent);
        placed = true;
      } else {
        if (!placed && var > v) {
          if (exponent > 0) m.powers_.emplace_back(v, exponent);
          placed = true;
        }
        m.powers_.emplace_back(var, e);
      }
    }
    if (!placed && exponent > 0) m.powers_.emplace_back(v, exponent);
    return m;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial m;
    auto i = a.powers_.begin();
    auto j = b.powers_.begin();
    while (i != a.powers_.end() || j != b.powers_.end()) {
      if (j == b.powers_.end() || (i != a.powers_.end() && i->first < j->first)) {
        m.powers_.push_back(*i++);
      } else if (i == a.powers_.end() || j->first < i->first) {
        m.powers_.push_back(*j++);
      } else {
        m.powers_.emplace_back(i->first, i->second + j->second);
        ++i;
        ++j;
      }
    }
    return m;
  }

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial& a, const Monomial& b) { return a.powers_ <=> b.powers_; }

 private:
  std::vector<std::pair<VarId, unsigned>> powers_;
};

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// The arithmetic operators place no limit on the number of variables (the
/// enumeration oracle integrates over whole regions); `poly_mul` is the
/// checked product used for weights and factor integrands.
class Polynomial {
 public:
  Polynomial() = default;

  static Polynomial constant(const Rational& c) {
    Polynomial p;
    if (c != 0) p.terms_.emplace(Monomial{}, c);
    return p;
  }

  static Polynomial variable(VarId v) { return monomial(Monomial::power(v, 1), Rational(1)); }

  static Polynomial monomial(const Monomial& m, const Rational& c) {
    Polynomial p;
    if (c != 0) p.terms_.emplace(m, c);
    return p;
  }

  /// a*v + b
  static Polynomial linear(VarId v, const Rational& a, const Rational& b) {
    Polynomial p = monomial(Monomial::power(v, 1), a);
    p.add_term(Monomial{}, b);
    return p;
  }

  const std::map<Monomial, Rational>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }

  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_constant()); }

  Rational constant_term() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Rational(0) : it->second;
  }

  std::set<VarId> variables() const {
    std::set<VarId> vars;
    for (const auto& [m, c] : terms_)
      for (const auto& [v, e] : m.powers()) vars.insert(v);
    return vars;
  }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
  }

  unsigned degree_in(VarId v) const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.exponent(v));
    return d;
  }

  void add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  /// Evaluates with `value(v)` supplying each variable's value.
  template <typename ValueFn>
  Rational evaluate(ValueFn&& value) const {
    Rational sum = 0;
    Rational term;
    for (const auto& [m, c] : terms_) {
      term = c;
      for (const auto& [v, e] : m.powers()) {
        const Rational x = value(v);
        for (unsigned k = 0; k < e; ++k) term *= x;
      }
      sum += term;
    }
    return sum;
  }

  Polynomial& operator+=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }

  Polynomial& operator-=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }

  Polynomial& operator*=(const Rational& k) {
    if (k == 0) {
      terms_.clear();
    } else {
      for (auto& [m, c] : terms_) c *= k;
    }
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& k) { return a *= k; }
  friend Polynomial operator-(Polynomial a) { return a *= Rational(-1); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial out;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
    return out;
  }

  Polynomial pow(unsigned k) const {
    Polynomial r = constant(1);
    for (unsigned i = 0; i < k; ++i) r = r * *this;
    return r;
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  /// Human-readable form, e.g. "3/2*x^2*y - 1"; `name(v)` maps ids to names.
  template <typename NameFn>
  std::string to_string(NameFn&& name) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [m, c] = *it;
      Rational mag = abs(c);
      if (first) {
        if (c < 0) out += "-";
      } else {
        out += c < 0 ? " - " : " + ";
      }
      first = false;
      bool need_coef = m.is_constant() || mag != 1;
      if (need_coef) out += mag.get_str();
      bool first_factor = !need_coef;
      for (const auto& [v, e] : m.powers()) {
        if (!first_factor) out += "*";
        first_factor = false;
        out += name(v);
        if (e > 1) out += "^" + std::to_string(e);
      }
    }
    return out;
  }

 private:
  std::map<Monomial, Rational> terms_;
};

/// Checked product: the combined variable set may hold at most two variables.
inline Polynomial poly_mul(const Polynomial& f, const Polynomial& g) {
  auto vars = f.variables();
  auto gv = g.variables();
  vars.insert(gv.begin(), gv.end());
  if (vars.size() > 2)
    throw Error(ErrorCode::TooManyVariables, "polynomial product spans " + std::to_string(vars.size()) + " variables");
  return f * g;
}

/// Term-wise power rule in `v`.
inline Polynomial antiderivative(const Polynomial& f, VarId v) {
  Polynomial out;
  for (const auto& [m, c] : f.terms()) {
    unsigned e = m.exponent(v);
    out.add_term(m.with_exponent(v, e + 1), c / Rational(e + 1));
  }
  return out;
}

inline Polynomial derivative(const Polynomial& f, VarId v) {
  Polynomial out;
  for (const auto& [m, c] : f.terms()) {
    unsigned e = m.exponent(v);
    if (e == 0) continue;
    out.add_term(m.with_exponent(v, e - 1), c * e);
  }
  return out;
}

/// Replaces `v` by the polynomial `g` everywhere in `f`.
inline Polynomial substitute(const Polynomial& f, VarId v, const Polynomial& g) {
  std::vector<Polynomial> powers{Polynomial::constant(1)};
  Polynomial out;
  for (const auto& [m, c] : f.terms()) {
    unsigned e = m.exponent(v);
    while (powers.size() <= e) powers.push_back(powers.back() * g);
    out += Polynomial::monomial(m.with_exponent(v, 0), c) * powers[e];
  }
  return out;
}

/// Integration bound slope*x + intercept; a constant when slope is zero.
struct LinearBound {
  Rational slope;
  Rational intercept;

  static LinearBound constant(const Rational& c) { return {Rational(0), c}; }

  Rational at(const Rational& x) const { return slope * x + intercept; }

  bool is_constant() const { return slope == 0; }

  Polynomial as_polynomial(VarId x) const { return Polynomial::linear(x, slope, intercept); }

  friend bool operator==(const LinearBound&, const LinearBound&) = default;
};

/// F(x, u(x)) - F(x, l(x)) where `F` is an antiderivative in `v` and `x` is
/// the variable the bounds depend on.
inline Polynomial substitute_linear_bounds(const Polynomial& F, VarId v, VarId x, const LinearBound& l,
                                           const LinearBound& u) {
  if (l == u) return {};
  return substitute(F, v, u.as_polynomial(x)) - substitute(F, v, l.as_polynomial(x));
}

}  // namespace mpwmi
