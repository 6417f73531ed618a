#pragma once

// Brute-force WMI: split the box into cells by the signs of the atoms,
// keep the cells that satisfy the CNF and integrate the weight product over
// each one by iterated integration. Variables are integrated in a greedy
// minimum-degree order so that each one's bounds mention few others.
//
// Shares only polynomial arithmetic with the message-passing solver.

#include <cstddef>
#include <map>
#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "mpwmi/atom.hpp"
#include "mpwmi/error.hpp"
#include "mpwmi/polynomial.hpp"
#include "mpwmi/problem.hpp"

namespace mpwmi::oracle {

struct EnumOptions {
  std::size_t max_variables = 5;
  std::size_t max_atoms = 40;
};

namespace detail {

/// sum(a[i] * x[i]) <= b over dense coefficients.
struct Constraint {
  std::vector<Rational> a;
  Rational b;
};

/// Affine function c + sum(a[i] * x[i]).
struct Affine {
  std::vector<Rational> a;
  Rational c;

  friend bool operator==(const Affine&, const Affine&) = default;

  Polynomial polynomial() const {
    Polynomial p = Polynomial::constant(c);
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] != 0) p = p + Polynomial::linear(static_cast<VarId>(i), a[i], Rational(0));
    return p;
  }
};

/// lhs <= rhs as a constraint.
inline Constraint less_equal(const Affine& lhs, const Affine& rhs) {
  Constraint k{std::vector<Rational>(lhs.a.size()), rhs.c - lhs.c};
  for (std::size_t i = 0; i < lhs.a.size(); ++i) k.a[i] = lhs.a[i] - rhs.a[i];
  return k;
}

class RegionIntegrator {
 public:
  explicit RegionIntegrator(std::size_t n) : n_(n) {}

  /// Integral of f times the product of `factors` over the region. A factor
  /// is multiplied in only when its first variable is integrated.
  Rational integrate(Polynomial f, std::vector<Polynomial> factors, std::vector<Constraint> cons,
                     std::vector<Rational> lo, std::vector<Rational> hi, std::size_t k = 0) const {
    std::vector<Constraint> rest;
    if (!tighten(cons, lo, hi, k, rest)) return 0;
    std::erase_if(factors, [&](const Polynomial& w) {
      const auto vars = w.variables();
      if (!vars.empty() && *vars.begin() > k) return false;
      f = f * w;
      return true;
    });
    if (k == n_) return f.constant_term();

    // Bounds of x_k as affine functions of the later variables.
    std::vector<Affine> lowers{constant_affine(lo[k])};
    std::vector<Affine> uppers{constant_affine(hi[k])};
    std::vector<Constraint> passthrough;
    for (const auto& con : rest) {
      if (con.a[k] == 0) {
        passthrough.push_back(con);
        continue;
      }
      Affine bound{std::vector<Rational>(n_), con.b / con.a[k]};
      for (std::size_t j = k + 1; j < n_; ++j) bound.a[j] = -con.a[j] / con.a[k];
      auto& side = con.a[k] > 0 ? uppers : lowers;
      if (std::find(side.begin(), side.end(), bound) == side.end()) side.push_back(std::move(bound));
    }

    const Polynomial F = antiderivative(f, static_cast<VarId>(k));
    std::vector<std::optional<Polynomial>> at_lower(lowers.size()), at_upper(uppers.size());
    auto at = [&](std::optional<Polynomial>& slot, const Affine& bound) -> const Polynomial& {
      if (!slot) slot = substitute(F, static_cast<VarId>(k), bound.polynomial());
      return *slot;
    };
    Rational total = 0;
    for (std::size_t i = 0; i < lowers.size(); ++i) {
      for (std::size_t j = 0; j < uppers.size(); ++j) {
        std::vector<Constraint> next = passthrough;
        for (std::size_t m = 0; m < lowers.size(); ++m)
          if (m != i) next.push_back(less_equal(lowers[m], lowers[i]));
        for (std::size_t m = 0; m < uppers.size(); ++m)
          if (m != j) next.push_back(less_equal(uppers[j], uppers[m]));
        next.push_back(less_equal(lowers[i], uppers[j]));
        auto lo_next = lo, hi_next = hi;
        std::vector<Constraint> kept;
        if (!tighten(next, lo_next, hi_next, k + 1, kept)) continue;
        const Polynomial g = at(at_upper[j], uppers[j]) - at(at_lower[i], lowers[i]);
        if (g.is_zero()) continue;
        total += integrate(g, factors, std::move(kept), std::move(lo_next), std::move(hi_next), k + 1);
      }
    }
    return total;
  }

 private:
  // Folds single-variable constraints into the box, propagates the others
  // onto the box until nothing changes and drops those the box implies.
  // Returns false when the region is empty.
  bool tighten(std::vector<Constraint>& cons, std::vector<Rational>& lo, std::vector<Rational>& hi, std::size_t k,
               std::vector<Constraint>& rest) const {
    for (int round = 0; round < 8; ++round) {
      bool changed = false;
      for (const auto& con : cons) {
        Rational min_lhs = 0;
        for (std::size_t j = k; j < n_; ++j) min_lhs += con.a[j] * (con.a[j] > 0 ? lo[j] : hi[j]);
        for (std::size_t j = k; j < n_; ++j) {
          if (con.a[j] == 0) continue;
          const Rational others = min_lhs - con.a[j] * (con.a[j] > 0 ? lo[j] : hi[j]);
          const Rational bound = (con.b - others) / con.a[j];
          if (con.a[j] > 0 && bound < hi[j]) {
            hi[j] = bound;
            changed = true;
          } else if (con.a[j] < 0 && bound > lo[j]) {
            lo[j] = bound;
            changed = true;
          }
        }
        if (min_lhs > con.b) return false;
      }
      for (std::size_t j = k; j < n_; ++j)
        if (!(lo[j] < hi[j])) return false;
      if (!changed) break;
    }
    for (auto& con : cons) {
      std::size_t count = 0;
      Rational max_lhs = 0;
      for (std::size_t j = k; j < n_; ++j) {
        if (con.a[j] == 0) continue;
        ++count;
        max_lhs += con.a[j] * (con.a[j] > 0 ? hi[j] : lo[j]);
      }
      if (count >= 2 && max_lhs > con.b) rest.push_back(std::move(con));
    }
    return true;
  }

  Affine constant_affine(const Rational& c) const { return Affine{std::vector<Rational>(n_), c}; }

  std::size_t n_;
};

/// Greedy minimum-degree elimination order on the graph joining variables
/// that share an atom, a clause or a weight. Ties go to the lowest id.
inline std::vector<VarId> elimination_order(const Problem& p) {
  const std::size_t n = p.size();
  std::vector<std::set<VarId>> adj(n);
  auto link = [&](const std::set<VarId>& vs) {
    for (VarId a : vs)
      for (VarId b : vs)
        if (a != b) adj[a].insert(b);
  };
  for (const auto& c : p.clauses) link(c.variables());
  for (const auto& w : p.weights) link(w.scope());
  std::vector<VarId> order;
  std::vector<bool> done(n, false);
  while (order.size() < n) {
    VarId best = 0;
    std::size_t best_deg = SIZE_MAX;
    for (VarId v = 0; v < n; ++v)
      if (!done[v] && adj[v].size() < best_deg) {
        best = v;
        best_deg = adj[v].size();
      }
    done[best] = true;
    order.push_back(best);
    const std::set<VarId> nb = adj[best];
    for (VarId a : nb) {
      adj[a].erase(best);
      for (VarId b : nb)
        if (a != b) adj[a].insert(b);
    }
  }
  return order;
}

/// The same problem with variable order[i] renamed to i.
inline Problem relabel(const Problem& p, const std::vector<VarId>& order) {
  std::vector<VarId> to(p.size());
  for (std::size_t i = 0; i < order.size(); ++i) to[order[i]] = static_cast<VarId>(i);
  auto literal = [&](const Literal& l) {
    std::vector<std::pair<VarId, Rational>> raw;
    for (const auto& [v, c] : l.coeffs) raw.emplace_back(to[v], Rational(c));
    return normalize_atom(raw, Rational(l.constant), l.op == Cmp::LT ? RawCmp::LT : RawCmp::LE);
  };
  Problem q;
  for (VarId v : order) q.variables.push_back(p.variables[v]);
  for (const auto& c : p.clauses) {
    std::vector<Literal> lits;
    for (const auto& l : c.literals) lits.push_back(literal(l));
    if (auto clause = make_clause(std::move(lits))) q.clauses.push_back(std::move(*clause));
  }
  for (const auto& w : p.weights) {
    Polynomial poly;
    for (const auto& [m, c] : w.weight.terms()) {
      Monomial renamed;
      for (const auto& [v, e] : m.powers()) renamed = renamed * Monomial::power(to[v], e);
      poly.add_term(renamed, c);
    }
    q.weights.push_back(WeightedLiteral{literal(w.literal), std::move(poly)});
  }
  validate(q);
  return q;
}

class Enumerator {
 public:
  Enumerator(const Problem& p) : p_(p), integrator_(p.size()) {
    for (const auto& c : p.clauses) {
      std::vector<std::pair<std::size_t, bool>> lits;
      for (const auto& l : c.literals) lits.push_back(intern(l));
      clauses_.push_back(std::move(lits));
    }
    for (const auto& w : p.weights) weights_.push_back(intern(w.literal));
  }

  std::size_t atom_count() const { return lines_.size(); }

  Rational run() {
    sign_.assign(lines_.size(), 0);
    lo_.clear();
    hi_.clear();
    for (const auto& v : p_.variables) {
      lo_.push_back(v.lower);
      hi_.push_back(v.upper);
    }
    total_ = 0;
    satisfy(0);
    return total_;
  }

 private:
  // sign_: 0 undecided, +1 literal side "below" (residual < 0), -1 above.
  std::pair<std::size_t, bool> intern(const Literal& l) {
    auto [line, below] = line_of(l);
    auto [it, fresh] = index_.try_emplace(line, lines_.size());
    if (fresh) lines_.push_back(line);
    return {it->second, below};
  }

  int holds(const std::pair<std::size_t, bool>& lit) const {
    const int s = sign_[lit.first];
    if (s == 0) return 0;
    return (s > 0) == lit.second ? 1 : -1;
  }

  // Makes `lit` true (or false); returns false if that contradicts the box.
  bool assign(const std::pair<std::size_t, bool>& lit, bool value) {
    const bool below = lit.second == value;
    sign_[lit.first] = below ? 1 : -1;
    const Line& line = lines_[lit.first];
    if (line.coeffs.size() == 1) {
      const auto [v, a] = line.coeffs.front();
      const Rational x = Rational(line.constant) / Rational(a);  // a > 0
      if (below) {
        if (x < hi_[v]) hi_[v] = x;
      } else if (x > lo_[v]) {
        lo_[v] = x;
      }
      return lo_[v] < hi_[v];
    }
    return true;
  }

  // Disjoint split per clause: the first true literal is the j-th one.
  void satisfy(std::size_t i) {
    if (i == clauses_.size()) return decide_weights(0);
    const auto& clause = clauses_[i];
    for (const auto& lit : clause)
      if (holds(lit) == 1) return satisfy(i + 1);
    for (std::size_t j = 0; j < clause.size(); ++j) {
      if (holds(clause[j]) == -1) continue;
      const auto saved_sign = sign_;
      const auto saved_lo = lo_, saved_hi = hi_;
      bool ok = true;
      for (std::size_t m = 0; m < j && ok; ++m)
        if (holds(clause[m]) == 0) ok = assign(clause[m], false);
      if (ok && holds(clause[j]) == 0) ok = assign(clause[j], true);
      if (ok && holds(clause[j]) == 1) satisfy(i + 1);
      sign_ = saved_sign;
      lo_ = saved_lo;
      hi_ = saved_hi;
    }
  }

  void decide_weights(std::size_t k) {
    while (k < weights_.size() && holds(weights_[k]) != 0) ++k;
    if (k == weights_.size()) return integrate_cell();
    for (bool value : {true, false}) {
      const auto saved_sign = sign_;
      const auto saved_lo = lo_, saved_hi = hi_;
      if (assign(weights_[k], value)) decide_weights(k + 1);
      sign_ = saved_sign;
      lo_ = saved_lo;
      hi_ = saved_hi;
    }
  }

  void integrate_cell() {
    const std::size_t n = p_.size();
    std::vector<Constraint> cons;
    for (std::size_t l = 0; l < lines_.size(); ++l) {
      if (sign_[l] == 0 || lines_[l].coeffs.size() == 1) continue;
      Constraint c{std::vector<Rational>(n), Rational(lines_[l].constant)};
      for (const auto& [v, a] : lines_[l].coeffs) c.a[v] = Rational(a);
      if (sign_[l] < 0) {
        for (auto& x : c.a) x = -x;
        c.b = -c.b;
      }
      cons.push_back(std::move(c));
    }
    std::vector<Polynomial> factors;
    for (std::size_t k = 0; k < weights_.size(); ++k)
      if (holds(weights_[k]) == 1) factors.push_back(p_.weights[k].weight);
    total_ += integrator_.integrate(Polynomial::constant(1), std::move(factors), std::move(cons), lo_, hi_);
  }

  const Problem& p_;
  RegionIntegrator integrator_;
  std::vector<Line> lines_;
  std::map<Line, std::size_t> index_;
  std::vector<std::vector<std::pair<std::size_t, bool>>> clauses_;
  std::vector<std::pair<std::size_t, bool>> weights_;
  std::vector<int> sign_;
  std::vector<Rational> lo_, hi_;
  Rational total_;
};

}  // namespace detail

/// Exact WMI by cell enumeration. Throws TooLarge beyond the configured
/// variable or atom caps.
inline Rational enum_wmi(const Problem& p, const EnumOptions& opts = {}) {
  if (p.size() > opts.max_variables)
    throw Error(ErrorCode::TooLarge, "enumeration oracle is capped at " + std::to_string(opts.max_variables) +
                                         " variables");
  const Problem ordered = detail::relabel(p, detail::elimination_order(p));
  detail::Enumerator e(ordered);
  if (e.atom_count() > opts.max_atoms)
    throw Error(ErrorCode::TooLarge, "enumeration oracle is capped at " + std::to_string(opts.max_atoms) + " atoms");
  return e.run();
}

}  // namespace mpwmi::oracle
