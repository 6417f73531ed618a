#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mpwmi/error.hpp"
#include "mpwmi/problem.hpp"

namespace mpwmi {

struct TreeComponent {
  std::vector<VarId> vars;  // sorted
  std::size_t diameter = 0;
  VarId center = 0;
};

/// Variables joined whenever they co-occur in a clause or in the scope of a
/// weighted literal. Variable bounds contribute no edges.
struct PrimalGraph {
  std::size_t num_nodes = 0;
  std::vector<std::pair<VarId, VarId>> edges;  // a < b, sorted, unique
  std::vector<std::vector<VarId>> adjacency;   // sorted neighbour lists
  bool is_tree = false;                        // forest, strictly
  std::size_t diameter = 0;                    // max over components
  VarId center = 0;                            // center of the first component
  std::vector<VarId> cycle;                    // witness when !is_tree
};

namespace detail {

inline std::vector<std::size_t> bfs_distances(const std::vector<std::vector<VarId>>& adj, VarId from) {
  std::vector<std::size_t> dist(adj.size(), std::numeric_limits<std::size_t>::max());
  std::queue<VarId> q;
  dist[from] = 0;
  q.push(from);
  while (!q.empty()) {
    VarId u = q.front();
    q.pop();
    for (VarId w : adj[u]) {
      if (dist[w] == std::numeric_limits<std::size_t>::max()) {
        dist[w] = dist[u] + 1;
        q.push(w);
      }
    }
  }
  return dist;
}

/// Finds one cycle in an undirected graph; empty if acyclic.
inline std::vector<VarId> find_cycle(const std::vector<std::vector<VarId>>& adj) {
  const std::size_t n = adj.size();
  constexpr VarId none = std::numeric_limits<VarId>::max();
  std::vector<VarId> parent(n, none);
  std::vector<int> state(n, 0);  // 0 new, 1 on stack, 2 done
  for (VarId root = 0; root < n; ++root) {
    if (state[root] != 0) continue;
    std::vector<std::pair<VarId, std::size_t>> stack{{root, 0}};
    state[root] = 1;
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      if (next == adj[u].size()) {
        state[u] = 2;
        stack.pop_back();
        continue;
      }
      VarId w = adj[u][next++];
      if (w == parent[u]) continue;
      if (state[w] == 1) {
        std::vector<VarId> cyc;
        for (VarId x = u; x != w; x = parent[x]) cyc.push_back(x);
        cyc.push_back(w);
        std::reverse(cyc.begin(), cyc.end());
        return cyc;
      }
      if (state[w] == 0) {
        parent[w] = u;
        state[w] = 1;
        stack.emplace_back(w, 0);
      }
    }
  }
  return {};
}

}  // namespace detail

inline PrimalGraph build_primal_graph(const Problem& p) {
  PrimalGraph g;
  g.num_nodes = p.variables.size();
  std::set<std::pair<VarId, VarId>> edges;
  auto add_scope = [&](const std::set<VarId>& vs) {
    if (vs.size() == 2) edges.emplace(*vs.begin(), *vs.rbegin());
  };
  for (const auto& c : p.clauses) add_scope(c.variables());
  for (const auto& w : p.weights) add_scope(w.scope());
  g.edges.assign(edges.begin(), edges.end());
  g.adjacency.assign(g.num_nodes, {});
  for (const auto& [a, b] : g.edges) {
    g.adjacency[a].push_back(b);
    g.adjacency[b].push_back(a);
  }
  for (auto& nb : g.adjacency) std::sort(nb.begin(), nb.end());
  g.cycle = detail::find_cycle(g.adjacency);
  g.is_tree = g.cycle.empty();
  return g;
}

/// Components of a forest with their diameters (double BFS) and centers
/// (minimum eccentricity, lowest id on ties). Throws NotATree with the
/// cycle when `g` is not a forest.
inline std::vector<TreeComponent> check_tree(PrimalGraph& g, const Problem& p) {
  if (!g.is_tree) {
    std::vector<std::string> names;
    for (VarId v : g.cycle) names.push_back(p.name(v));
    throw NotATreeError(std::move(names));
  }
  std::vector<TreeComponent> comps;
  std::vector<bool> seen(g.num_nodes, false);
  for (VarId start = 0; start < g.num_nodes; ++start) {
    if (seen[start]) continue;
    auto dist = detail::bfs_distances(g.adjacency, start);
    TreeComponent comp;
    VarId far = start;
    for (VarId v = 0; v < g.num_nodes; ++v) {
      if (dist[v] == std::numeric_limits<std::size_t>::max()) continue;
      seen[v] = true;
      comp.vars.push_back(v);
      if (dist[v] > dist[far]) far = v;
    }
    auto from_far = detail::bfs_distances(g.adjacency, far);
    for (VarId v : comp.vars) comp.diameter = std::max(comp.diameter, from_far[v]);

    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (VarId v : comp.vars) {
      auto d = detail::bfs_distances(g.adjacency, v);
      std::size_t ecc = 0;
      for (VarId w : comp.vars) ecc = std::max(ecc, d[w]);
      if (ecc < best) {
        best = ecc;
        comp.center = v;
      }
    }
    comps.push_back(std::move(comp));
  }
  g.diameter = 0;
  for (const auto& c : comps) g.diameter = std::max(g.diameter, c.diameter);
  g.center = comps.empty() ? 0 : comps.front().center;
  return comps;
}

}  // namespace mpwmi
