#pragma once

// Factor-to-variable message construction: the interval sweep over
// critical points, per-interval strips of the integration variable, and
// exact symbolic integration between linear bounds.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "mpwmi/atom.hpp"
#include "mpwmi/factor_graph.hpp"
#include "mpwmi/piecewise.hpp"
#include "mpwmi/polynomial.hpp"
#include "mpwmi/univariate.hpp"

namespace mpwmi {

/// a_t*t + a_s*s - b in the frame of a factor seen from target variable t.
struct FrameLine {
  Rational a_t;
  Rational a_s;
  Rational b;

  bool vertical() const { return a_s == 0; }

  /// For a non-vertical line: s as a function of t.
  LinearBound as_bound() const { return {-a_t / a_s, b / a_s}; }

  /// For a vertical line: its t coordinate.
  Rational t_value() const { return b / a_t; }

  Rational residual(const Rational& t, const Rational& s) const { return a_t * t + a_s * s - b; }
};

struct FrameLiteral {
  std::size_t line;
  bool below;  // holds where the residual is negative
};

/// Subset of a factor's weighted literals that hold inside one cell.
using WeightSet = std::vector<bool>;

/// A factor seen from its target variable t; for pair factors s is the other
/// scope variable. Lines are deduplicated so that literal truth inside an
/// open cell follows from one sign per line.
class FactorFrame {
 public:
  FactorFrame(const Factor& f, VarId target) : target_(target), other_(f.is_unit() ? target : f.other(target)) {
    for (const auto& c : f.clauses) {
      std::vector<FrameLiteral> lits;
      for (const auto& l : c.literals) lits.push_back(intern(l));
      clauses_.push_back(std::move(lits));
    }
    for (const auto& w : f.weights) {
      weight_literals_.push_back(intern(w.literal));
      weights_.push_back(f.is_unit() ? BiPoly::in_t(UniPoly::from_polynomial(w.weight, target_))
                                     : BiPoly::from_polynomial(w.weight, target_, other_));
    }
  }

  /// Appends clauses (query conjuncts) to the frame.
  void add_clauses(const std::vector<Clause>& extra) {
    for (const auto& c : extra) {
      std::vector<FrameLiteral> lits;
      for (const auto& l : c.literals) lits.push_back(intern(l));
      clauses_.push_back(std::move(lits));
    }
  }

  VarId target() const { return target_; }
  VarId other() const { return other_; }
  const std::vector<FrameLine>& lines() const { return lines_; }
  std::size_t atom_count() const { return lines_.size(); }
  std::size_t weight_count() const { return weights_.size(); }
  const BiPoly& weight(std::size_t k) const { return weights_[k]; }

  bool literal_holds(const FrameLiteral& l, const Rational& t, const Rational& s) const {
    return (sgn(lines_[l.line].residual(t, s)) < 0) == l.below;
  }

  /// Satisfaction at an interior sample point (no line passes through it).
  bool satisfied(const Rational& t, const Rational& s) const {
    for (const auto& c : clauses_) {
      bool any = false;
      for (const auto& l : c) any = any || literal_holds(l, t, s);
      if (!any) return false;
    }
    return true;
  }

  WeightSet active_weights(const Rational& t, const Rational& s) const {
    WeightSet sigma(weights_.size());
    for (std::size_t k = 0; k < weights_.size(); ++k) sigma[k] = literal_holds(weight_literals_[k], t, s);
    return sigma;
  }

  BiPoly weight_product(const WeightSet& sigma) const {
    BiPoly w = BiPoly::constant(1);
    for (std::size_t k = 0; k < sigma.size(); ++k)
      if (sigma[k]) w = w * weights_[k];
    return w;
  }

 private:
  FrameLiteral intern(const Literal& lit) {
    auto [line, below] = line_of(lit);
    auto it = line_index_.find(line);
    std::size_t idx;
    if (it == line_index_.end()) {
      idx = lines_.size();
      FrameLine fl{Rational(0), Rational(0), Rational(line.constant)};
      for (const auto& [v, c] : line.coeffs) (v == target_ ? fl.a_t : fl.a_s) = Rational(c);
      lines_.push_back(fl);
      line_index_.emplace(std::move(line), idx);
    } else {
      idx = it->second;
    }
    return {idx, below};
  }

  VarId target_;
  VarId other_;
  std::vector<FrameLine> lines_;
  std::map<Line, std::size_t> line_index_;
  std::vector<std::vector<FrameLiteral>> clauses_;
  std::vector<FrameLiteral> weight_literals_;
  std::vector<BiPoly> weights_;
};

/// Values of t where the cell structure over s can change: pairwise line
/// intersections, crossings of lines with the message's endpoints, vertical
/// lines and the bounds of t. Only points inside [t_lo, t_hi] are kept.
inline std::vector<Rational> critical_points(const Piecewise& msg, const FactorFrame& frame, const Rational& t_lo,
                                             const Rational& t_hi) {
  std::vector<Rational> pts{t_lo, t_hi};
  auto keep = [&](Rational x) {
    if (t_lo <= x && x <= t_hi) pts.push_back(std::move(x));
  };
  const auto& lines = frame.lines();
  const auto endpoints = msg.breakpoints();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].vertical()) {
      keep(lines[i].t_value());
      continue;
    }
    const LinearBound bi = lines[i].as_bound();
    if (bi.slope != 0)
      for (const auto& e : endpoints) keep((e - bi.intercept) / bi.slope);
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      if (lines[j].vertical()) continue;
      const LinearBound bj = lines[j].as_bound();
      if (bi.slope != bj.slope) keep((bj.intercept - bi.intercept) / (bi.slope - bj.slope));
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

using Interval = std::pair<Rational, Rational>;

inline std::vector<Interval> intervals_from_points(const std::vector<Rational>& points) {
  std::vector<Interval> out;
  for (std::size_t k = 0; k + 1 < points.size(); ++k) out.emplace_back(points[k], points[k + 1]);
  return out;
}

/// A feasible cell of one sweep interval: s runs from `lower(t)` to
/// `upper(t)` inside message piece `piece`, with weights `sigma` active.
struct Strip {
  LinearBound lower;
  LinearBound upper;
  std::size_t piece;
  WeightSet sigma;
};

namespace detail {

enum class StripKind { Gap, Infeasible, Feasible };

struct RawStrip {
  LinearBound lower;
  LinearBound upper;
  StripKind kind;
  std::size_t piece = 0;
  WeightSet sigma;
};

/// Cuts the s axis at t = midpoint of `interval` by every non-vertical line
/// and every message endpoint, and classifies each strip.
inline std::vector<RawStrip> classify_strips(const Piecewise& msg, const Interval& interval, const FactorFrame& frame) {
  const Rational t_hat = (interval.first + interval.second) / 2;
  std::vector<std::pair<Rational, LinearBound>> cuts;
  for (const auto& e : msg.breakpoints()) cuts.emplace_back(e, LinearBound::constant(e));
  for (const auto& line : frame.lines()) {
    if (line.vertical()) continue;
    LinearBound b = line.as_bound();
    cuts.emplace_back(b.at(t_hat), b);
  }
  // Equal values at an interior sample mean identical functions on the
  // whole interval; constants sort first and win the dedup.
  std::stable_sort(cuts.begin(), cuts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  cuts.erase(std::unique(cuts.begin(), cuts.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
             cuts.end());

  std::vector<RawStrip> out;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    RawStrip strip{cuts[k].second, cuts[k + 1].second, StripKind::Gap, 0, {}};
    const Rational s_hat = (cuts[k].first + cuts[k + 1].first) / 2;
    const auto piece = msg.find_interior(s_hat);
    if (piece >= 0) {
      strip.piece = static_cast<std::size_t>(piece);
      if (frame.satisfied(t_hat, s_hat)) {
        strip.kind = StripKind::Feasible;
        strip.sigma = frame.active_weights(t_hat, s_hat);
      } else {
        strip.kind = StripKind::Infeasible;
      }
    }
    out.push_back(std::move(strip));
  }
  return out;
}

}  // namespace detail

/// Feasible strips of one sweep interval (see `Strip`).
inline std::vector<Strip> feasible_strips(const Piecewise& msg, const Interval& interval, const FactorFrame& frame) {
  std::vector<Strip> out;
  for (auto& raw : detail::classify_strips(msg, interval, frame))
    if (raw.kind == detail::StripKind::Feasible)
      out.push_back(Strip{raw.lower, raw.upper, raw.piece, std::move(raw.sigma)});
  return out;
}

struct MsgPiece {
  LinearBound lower;
  LinearBound upper;
  Polynomial integrand;  // over the target and the integration variable
};

/// Integration bounds and integrands of every feasible strip in `interval`:
/// message piece times the weights of the literals holding in the strip.
inline std::vector<MsgPiece> get_msg_pieces(const Piecewise& msg, const Interval& interval, const FactorFrame& frame) {
  std::vector<MsgPiece> out;
  for (const auto& strip : feasible_strips(msg, interval, frame)) {
    BiPoly w = frame.weight_product(strip.sigma).times_s_poly(msg.pieces()[strip.piece].poly);
    Polynomial integrand;
    const auto& by_s = w.by_s();
    for (std::size_t j = 0; j < by_s.size(); ++j)
      for (std::size_t i = 0; i < by_s[j].coeffs().size(); ++i)
        integrand.add_term(Monomial::power(frame.target(), static_cast<unsigned>(i)) *
                               Monomial::power(frame.other(), static_cast<unsigned>(j)),
                           by_s[j].coeffs()[i]);
    out.push_back(MsgPiece{strip.lower, strip.upper, std::move(integrand)});
  }
  return out;
}

namespace detail {

/// C(t, s) = integral from -inf to s of msg(r) * W(t, r) dr for one weight
/// set, evaluated at s = B(t). Full-piece integrals are prefix-summed and
/// substitutions are cached per (piece, bound).
class CumulativeIntegral {
 public:
  CumulativeIntegral(const Piecewise& msg, BiPoly weight) : msg_(msg) {
    const auto& pieces = msg.pieces();
    antiderivatives_.reserve(pieces.size());
    starts_.reserve(pieces.size());
    prefix_.reserve(pieces.size() + 1);
    prefix_.emplace_back();
    for (const auto& p : pieces) {
      BiPoly H = weight.times_s_poly(p.poly).antiderivative_s();
      UniPoly start = H.at_s(p.lo);
      prefix_.push_back(prefix_.back() + (H.at_s(p.hi) - start));
      antiderivatives_.push_back(std::move(H));
      starts_.push_back(std::move(start));
    }
  }

  /// `value` is B at the interval's sample point; it locates the piece.
  UniPoly at(const LinearBound& B, const Rational& value) {
    const auto& pieces = msg_.pieces();
    auto it = std::upper_bound(pieces.begin(), pieces.end(), value,
                               [](const Rational& v, const Piece& p) { return v < p.hi; });
    const auto j = static_cast<std::size_t>(it - pieces.begin());
    if (j == pieces.size() || !(pieces[j].lo < value)) return prefix_[j];
    auto key = std::make_tuple(j, B.slope, B.intercept);
    auto cached = cache_.find(key);
    if (cached == cache_.end())
      cached = cache_.emplace(std::move(key), antiderivatives_[j].at_s(B) - starts_[j]).first;
    return prefix_[j] + cached->second;
  }

 private:
  const Piecewise& msg_;
  std::vector<BiPoly> antiderivatives_;
  std::vector<UniPoly> starts_;
  std::vector<UniPoly> prefix_;
  std::map<std::tuple<std::size_t, Rational, Rational>, UniPoly> cache_;
};

}  // namespace detail

/// Message from a pair factor to its target variable t:
/// m(t) = integral of factor(t, s) * msg(s) ds, restricted to [t_lo, t_hi].
inline Piecewise factor_to_variable(const FactorFrame& frame, const Piecewise& msg, const Rational& t_lo,
                                    const Rational& t_hi) {
  if (msg.empty()) return {};
  std::map<WeightSet, detail::CumulativeIntegral> cumulative;
  auto cumulative_for = [&](const WeightSet& sigma) -> detail::CumulativeIntegral& {
    auto it = cumulative.find(sigma);
    if (it == cumulative.end()) it = cumulative.try_emplace(sigma, msg, frame.weight_product(sigma)).first;
    return it->second;
  };

  std::vector<Piece> pieces;
  for (const auto& interval : intervals_from_points(critical_points(msg, frame, t_lo, t_hi))) {
    const Rational t_hat = (interval.first + interval.second) / 2;
    UniPoly total;
    std::optional<detail::RawStrip> run;
    auto close_run = [&] {
      if (!run) return;
      auto& C = cumulative_for(run->sigma);
      total += C.at(run->upper, run->upper.at(t_hat));
      total -= C.at(run->lower, run->lower.at(t_hat));
      run.reset();
    };
    for (auto& strip : detail::classify_strips(msg, interval, frame)) {
      switch (strip.kind) {
        case detail::StripKind::Gap:
          break;
        case detail::StripKind::Infeasible:
          close_run();
          break;
        case detail::StripKind::Feasible:
          if (run && run->sigma == strip.sigma) {
            run->upper = strip.upper;
          } else {
            close_run();
            run = std::move(strip);
          }
          break;
      }
    }
    close_run();
    pieces.push_back(Piece{interval.first, interval.second, std::move(total)});
  }
  return Piecewise(std::move(pieces));
}

/// Message of a unit factor to its variable: the factor itself as a
/// piecewise polynomial over the variable's bounds.
inline Piecewise unit_factor_message(const FactorFrame& frame, const Rational& lo, const Rational& hi) {
  std::vector<Rational> pts{lo, hi};
  for (const auto& line : frame.lines()) {
    Rational x = line.t_value();
    if (lo < x && x < hi) pts.push_back(std::move(x));
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<Piece> pieces;
  const Rational zero = 0;
  for (const auto& [a, b] : intervals_from_points(pts)) {
    const Rational t_hat = (a + b) / 2;
    if (!frame.satisfied(t_hat, zero)) continue;
    pieces.push_back(Piece{a, b, frame.weight_product(frame.active_weights(t_hat, zero)).at_s(zero)});
  }
  return Piecewise(std::move(pieces));
}

}  // namespace mpwmi
