#pragma once

// Piece-count certificate: a recurrence over directed pair-factor nodes that
// bounds the number of pieces of every variable-to-factor message, checked
// against the messages actually produced.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "mpwmi/factor_graph.hpp"
#include "mpwmi/messages.hpp"
#include "mpwmi/rational.hpp"
#include "mpwmi/solver.hpp"

namespace mpwmi {

struct PieceBoundCertificate {
  std::size_t c = 0;  // max distinct atom lines of any factor, bounds included
  std::size_t d = 0;  // factor-graph diameter
  std::size_t n = 0;
  std::size_t s = 0;  // directed factor nodes
  std::vector<std::string> nodes;
  std::vector<std::vector<std::size_t>> feeds;  // predecessors of each node
  std::vector<std::vector<Integer>> state_vectors;
  Integer total_bound;
  Integer measured_pieces;
  Integer envelope;
  std::size_t all_message_pieces = 0;
  bool nilpotent = false;
  bool ok = false;
};

namespace detail {

/// Distinct atom lines of a factor; unit factors also count their bounds.
inline std::size_t factor_atom_count(const FactorGraph& g, std::size_t f) {
  const Factor& factor = g.factor(f);
  if (!factor.is_unit()) return FactorFrame(factor, factor.scope.front()).atom_count();
  const VarId v = factor.scope.front();
  Factor with_bounds = factor;
  const auto& var = g.problem().variables[v];
  with_bounds.clauses.push_back(
      Clause{{normalize_atom({{v, Rational(1)}}, var.lower, RawCmp::GE), normalize_atom({{v, Rational(1)}}, var.upper, RawCmp::LE)}});
  return FactorFrame(with_bounds, v).atom_count();
}

/// Diameter of the bipartite factor graph (max over components).
inline std::size_t factor_graph_diameter(const FactorGraph& g) {
  const std::size_t n = g.num_variables();
  std::vector<std::vector<VarId>> adj(n + g.factors().size());
  for (const auto& e : g.edges()) {
    adj[e.var].push_back(static_cast<VarId>(n + e.factor));
    adj[n + e.factor].push_back(e.var);
  }
  std::size_t best = 0;
  for (VarId root : g.roots()) {
    auto dist = bfs_distances(adj, root);
    VarId far = root;
    for (VarId x = 0; x < adj.size(); ++x)
      if (dist[x] != std::numeric_limits<std::size_t>::max() && dist[x] > dist[far]) far = x;
    auto from_far = bfs_distances(adj, far);
    for (auto dd : from_far)
      if (dd != std::numeric_limits<std::size_t>::max()) best = std::max(best, dd);
  }
  return best;
}

/// True when the 0/1 matrix given by predecessor lists satisfies A^k = 0.
inline bool power_vanishes(const std::vector<std::vector<std::size_t>>& preds, std::size_t k) {
  const std::size_t s = preds.size();
  if (s == 0) return true;
  const std::size_t words = (s + 63) / 64;
  using Rows = std::vector<std::vector<std::uint64_t>>;
  Rows a(s, std::vector<std::uint64_t>(words, 0));
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j : preds[i]) a[i][j / 64] |= std::uint64_t{1} << (j % 64);
  Rows power = a;
  for (std::size_t step = 1; step < k; ++step) {
    Rows next(s, std::vector<std::uint64_t>(words, 0));
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j)
        if (power[i][j / 64] >> (j % 64) & 1)
          for (std::size_t w = 0; w < words; ++w) next[i][w] |= a[j][w];
    power = std::move(next);
  }
  for (const auto& row : power)
    for (auto w : row)
      if (w) return false;
  return true;
}

}  // namespace detail

/// Node 2k is pair factor k seen upward (message from its child variable),
/// node 2k+1 the same factor seen downward (message from its parent).
inline PieceBoundCertificate certify_piece_bound(const Solution& sol) {
  const FactorGraph& g = sol.graph();
  const Problem& p = g.problem();
  const std::size_t n = g.num_variables();
  const std::size_t pairs = g.factors().size() - n;

  PieceBoundCertificate cert;
  cert.n = n;
  cert.s = 2 * pairs;
  for (std::size_t f = 0; f < g.factors().size(); ++f) cert.c = std::max(cert.c, detail::factor_atom_count(g, f));
  cert.d = detail::factor_graph_diameter(g);

  std::vector<VarId> child(pairs), parent(pairs);
  for (const auto& sched : sol.schedules())
    for (const auto& step : sched.upward)
      if (step.from.is_variable()) {
        const std::size_t k = step.to.index - n;
        child[k] = static_cast<VarId>(step.from.index);
        parent[k] = g.factor(step.to.index).other(child[k]);
      }

  cert.feeds.assign(cert.s, {});
  for (std::size_t k = 0; k < pairs; ++k) {
    const std::size_t f = n + k;
    cert.nodes.push_back(p.name(child[k]) + "->" + p.name(parent[k]));
    cert.nodes.push_back(p.name(parent[k]) + "->" + p.name(child[k]));
    for (std::size_t e : g.variable_edges(child[k])) {
      const std::size_t h = g.edges()[e].factor;
      if (h != f && h >= n) cert.feeds[2 * k].push_back(2 * (h - n));
    }
    for (std::size_t e : g.variable_edges(parent[k])) {
      const std::size_t h = g.edges()[e].factor;
      if (h == f || h < n) continue;
      cert.feeds[2 * k + 1].push_back(child[h - n] == parent[k] ? 2 * (h - n) + 1 : 2 * (h - n));
    }
  }

  // v(t)[x] = sum over predecessors y of 2c v(t-1)[y] + c^2 [v(t-1)[y] > 0].
  const Integer c = static_cast<unsigned long>(cert.c);
  std::vector<Integer> v(cert.s, 0);
  for (std::size_t x = 0; x < cert.s; ++x)
    if (cert.feeds[x].empty()) v[x] = c;
  cert.total_bound = 0;
  for (std::size_t t = 0; t <= cert.s + 1; ++t) {
    bool any = false;
    for (const auto& value : v) {
      cert.total_bound += value;
      any = any || value != 0;
    }
    if (!any) break;
    cert.state_vectors.push_back(v);
    std::vector<Integer> next(cert.s, 0);
    for (std::size_t x = 0; x < cert.s; ++x)
      for (std::size_t y : cert.feeds[x])
        if (v[y] != 0) next[x] += 2 * c * v[y] + c * c;
    v = std::move(next);
  }

  cert.measured_pieces = 0;
  for (std::size_t k = 0; k < pairs; ++k) {
    const std::size_t f = n + k;
    for (VarId x : {child[k], parent[k]})
      if (const auto& m = sol.messages().to_factor[g.edge_index(x, f)]) cert.measured_pieces += m->size();
  }
  for (const auto* dir : {&sol.messages().to_factor, &sol.messages().to_variable})
    for (const auto& m : *dir)
      if (m) cert.all_message_pieces += m->size();

  mpz_pow_ui(cert.envelope.get_mpz_t(), Integer(2 * c * static_cast<unsigned long>(cert.s)).get_mpz_t(),
             static_cast<unsigned long>(2 * cert.d + 2));
  cert.envelope *= 2;
  cert.nilpotent = detail::power_vanishes(cert.feeds, cert.d + 1);
  cert.ok = cert.nilpotent && cert.measured_pieces <= cert.total_bound && cert.total_bound <= cert.envelope;
  return cert;
}

}  // namespace mpwmi
