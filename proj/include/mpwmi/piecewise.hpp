#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mpwmi/rational.hpp"
#include "mpwmi/univariate.hpp"

namespace mpwmi {

struct Piece {
  Rational lo;
  Rational hi;
  UniPoly poly;

  friend bool operator==(const Piece&, const Piece&) = default;
};

/// Univariate piecewise polynomial, zero outside its pieces.
///
/// Invariants (established by every constructor and operation): lo < hi per
/// piece, pieces sorted with pairwise disjoint interiors, no zero
/// polynomials, and touching neighbours never share the same polynomial.
class Piecewise {
 public:
  Piecewise() = default;

  explicit Piecewise(std::vector<Piece> pieces) : pieces_(std::move(pieces)) { normalize(); }

  static Piecewise constant_on(const Rational& lo, const Rational& hi, const Rational& value = Rational(1)) {
    return Piecewise({Piece{lo, hi, UniPoly::constant(value)}});
  }

  const std::vector<Piece>& pieces() const { return pieces_; }
  std::size_t size() const { return pieces_.size(); }
  bool empty() const { return pieces_.empty(); }

  /// Sorted distinct piece endpoints.
  std::vector<Rational> breakpoints() const {
    std::vector<Rational> pts;
    pts.reserve(2 * pieces_.size());
    for (const auto& p : pieces_) {
      if (pts.empty() || pts.back() != p.lo) pts.push_back(p.lo);
      pts.push_back(p.hi);
    }
    return pts;
  }

  /// Index of the piece whose open interior contains x, or -1.
  std::ptrdiff_t find_interior(const Rational& x) const {
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                               [](const Rational& v, const Piece& p) { return v < p.hi; });
    if (it == pieces_.end() || !(it->lo < x)) return -1;
    return it - pieces_.begin();
  }

  /// Value at x; at an endpoint shared by two pieces the left piece wins.
  Rational operator()(const Rational& x) const {
    auto it = std::lower_bound(pieces_.begin(), pieces_.end(), x,
                               [](const Piece& p, const Rational& v) { return p.hi < v; });
    if (it == pieces_.end() || x < it->lo) return 0;
    return it->poly(x);
  }

  Rational integral() const {
    Rational sum = 0;
    for (const auto& p : pieces_) sum += p.poly.integrate(p.lo, p.hi);
    return sum;
  }

  /// Integral of x^k times this function.
  Rational moment_integral(unsigned k) const {
    Rational sum = 0;
    const UniPoly xk = UniPoly::monomial(k, Rational(1));
    for (const auto& p : pieces_) sum += (p.poly * xk).integrate(p.lo, p.hi);
    return sum;
  }

  Piecewise scaled(const Rational& k) const {
    if (k == 0) return {};
    Piecewise out = *this;
    for (auto& p : out.pieces_) p.poly *= k;
    return out;
  }

  /// Re-establishes the invariants; idempotent.
  void normalize() {
    std::erase_if(pieces_, [](const Piece& p) { return p.poly.is_zero() || !(p.lo < p.hi); });
    std::sort(pieces_.begin(), pieces_.end(), [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
    std::vector<Piece> merged;
    merged.reserve(pieces_.size());
    for (auto& p : pieces_) {
      if (!merged.empty()) {
        if (p.lo < merged.back().hi) throw std::logic_error("Piecewise: overlapping pieces");
        if (p.lo == merged.back().hi && p.poly == merged.back().poly) {
          merged.back().hi = p.hi;
          continue;
        }
      }
      merged.push_back(std::move(p));
    }
    pieces_ = std::move(merged);
  }

  friend bool operator==(const Piecewise&, const Piecewise&) = default;

 private:
  std::vector<Piece> pieces_;
};

namespace detail {

inline Piecewise multiply_two(const Piecewise& a, const Piecewise& b) {
  std::vector<Piece> out;
  const auto& pa = a.pieces();
  const auto& pb = b.pieces();
  std::size_t i = 0, j = 0;
  while (i < pa.size() && j < pb.size()) {
    const Rational& lo = pa[i].lo > pb[j].lo ? pa[i].lo : pb[j].lo;
    const Rational& hi = pa[i].hi < pb[j].hi ? pa[i].hi : pb[j].hi;
    if (lo < hi) out.push_back(Piece{lo, hi, pa[i].poly * pb[j].poly});
    if (pa[i].hi < pb[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return Piecewise(std::move(out));
}

}  // namespace detail

/// Pointwise product; intervals missing from any operand vanish.
inline Piecewise piecewise_product(std::span<const Piecewise> fs) {
  if (fs.empty()) throw std::invalid_argument("piecewise_product: empty operand list");
  Piecewise acc = fs.front();
  for (std::size_t k = 1; k < fs.size() && !acc.empty(); ++k) acc = detail::multiply_two(acc, fs[k]);
  return acc;
}

inline Piecewise piecewise_product(const Piecewise& a, const Piecewise& b) { return detail::multiply_two(a, b); }

/// Pointwise sum over the union of both breakpoint sets.
inline Piecewise piecewise_sum(const Piecewise& a, const Piecewise& b) {
  std::vector<Rational> pts = a.breakpoints();
  auto pb = b.breakpoints();
  pts.insert(pts.end(), pb.begin(), pb.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  std::vector<Piece> out;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    Rational mid = (pts[k] + pts[k + 1]) / 2;
    UniPoly p;
    auto ia = a.find_interior(mid);
    auto ib = b.find_interior(mid);
    if (ia >= 0) p += a.pieces()[static_cast<std::size_t>(ia)].poly;
    if (ib >= 0) p += b.pieces()[static_cast<std::size_t>(ib)].poly;
    out.push_back(Piece{pts[k], pts[k + 1], std::move(p)});
  }
  return Piecewise(std::move(out));
}

inline Rational definite_integral(const Piecewise& f) { return f.integral(); }

inline Rational piecewise_eval(const Piecewise& f, const Rational& x) { return f(x); }

}  // namespace mpwmi
