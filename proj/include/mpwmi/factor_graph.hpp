#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mpwmi/error.hpp"
#include "mpwmi/primal_graph.hpp"
#include "mpwmi/problem.hpp"

namespace mpwmi {

/// One factor of the factorized formula: the clauses over exactly its
/// scope plus the weighted literals whose scope it matches. Unit factors
/// additionally carry their variable's bounds.
struct Factor {
  std::vector<VarId> scope;  // one or two variables, sorted
  std::vector<std::size_t> clause_ids;
  std::vector<Clause> clauses;
  std::vector<std::size_t> weight_ids;
  std::vector<WeightedLiteral> weights;

  bool is_unit() const { return scope.size() == 1; }

  VarId other(VarId v) const { return scope[0] == v ? scope[1] : scope[0]; }
};

/// Incidence between a variable node and a factor node.
struct FactorEdge {
  VarId var;
  std::size_t factor;
};

struct NodeRef {
  enum class Kind { Variable, Factor };
  Kind kind;
  std::size_t index;

  static NodeRef variable(VarId v) { return {Kind::Variable, v}; }
  static NodeRef factor(std::size_t f) { return {Kind::Factor, f}; }
  bool is_variable() const { return kind == Kind::Variable; }

  friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

/// Bipartite variable/factor graph of a forest-structured problem. Factor
/// `v` is the unit factor of variable `v`; pair factors follow in primal
/// edge order.
class FactorGraph {
 public:
  const Problem& problem() const { return *problem_; }
  std::shared_ptr<const Problem> problem_ptr() const { return problem_; }

  std::size_t num_variables() const { return problem_->variables.size(); }
  const std::vector<Factor>& factors() const { return factors_; }
  const Factor& factor(std::size_t f) const { return factors_.at(f); }
  const std::vector<FactorEdge>& edges() const { return edges_; }

  /// Incident edges of a variable: the unit factor first, then pair factors
  /// ordered by the neighbouring variable.
  const std::vector<std::size_t>& variable_edges(VarId v) const { return var_edges_.at(v); }
  const std::vector<std::size_t>& factor_edges(std::size_t f) const { return factor_edges_.at(f); }

  std::size_t edge_index(VarId v, std::size_t f) const {
    for (std::size_t e : factor_edges_.at(f))
      if (edges_[e].var == v) return e;
    throw Error(ErrorCode::MissingInput, "variable is not in the factor's scope");
  }

  std::size_t unit_factor(VarId v) const { return v; }

  std::optional<std::size_t> pair_factor(VarId a, VarId b) const {
    if (a > b) std::swap(a, b);
    auto it = pair_index_.find({a, b});
    if (it == pair_index_.end()) return std::nullopt;
    return it->second;
  }

  const PrimalGraph& primal() const { return primal_; }
  const std::vector<TreeComponent>& components() const { return components_; }
  std::size_t component_of(VarId v) const { return component_of_.at(v); }

  /// Root of each component: its center unless overridden.
  const std::vector<VarId>& roots() const { return roots_; }

  std::string to_dot() const {
    std::ostringstream os;
    os << "graph factors {\n";
    for (VarId v = 0; v < num_variables(); ++v) os << "  v" << v << " [shape=circle,label=\"" << problem_->name(v) << "\"];\n";
    for (std::size_t f = 0; f < factors_.size(); ++f) {
      os << "  f" << f << " [shape=box,label=\"f(";
      for (std::size_t k = 0; k < factors_[f].scope.size(); ++k)
        os << (k ? "," : "") << problem_->name(factors_[f].scope[k]);
      os << ")\"];\n";
    }
    for (const auto& e : edges_) os << "  v" << e.var << " -- f" << e.factor << ";\n";
    os << "}\n";
    return os.str();
  }

 private:
  friend FactorGraph factorize(std::shared_ptr<const Problem>, std::optional<VarId>);

  std::shared_ptr<const Problem> problem_;
  std::vector<Factor> factors_;
  std::vector<FactorEdge> edges_;
  std::vector<std::vector<std::size_t>> var_edges_;
  std::vector<std::vector<std::size_t>> factor_edges_;
  std::map<std::pair<VarId, VarId>, std::size_t> pair_index_;
  PrimalGraph primal_;
  std::vector<TreeComponent> components_;
  std::vector<std::size_t> component_of_;
  std::vector<VarId> roots_;
};

/// Partitions clauses and weighted literals by scope. Throws NotATree when
/// the primal graph has a cycle and UnknownRoot for an out-of-range root.
inline FactorGraph factorize(std::shared_ptr<const Problem> problem, std::optional<VarId> root = std::nullopt) {
  FactorGraph g;
  g.problem_ = std::move(problem);
  const Problem& p = *g.problem_;
  const auto n = static_cast<VarId>(p.variables.size());

  g.primal_ = build_primal_graph(p);
  g.components_ = check_tree(g.primal_, p);
  g.component_of_.assign(n, 0);
  for (std::size_t c = 0; c < g.components_.size(); ++c)
    for (VarId v : g.components_[c].vars) g.component_of_[v] = c;
  for (const auto& comp : g.components_) g.roots_.push_back(comp.center);
  if (root) {
    if (*root >= n) throw Error(ErrorCode::UnknownRoot, "root is not a variable of the problem");
    g.roots_[g.component_of_[*root]] = *root;
  }

  for (VarId v = 0; v < n; ++v) g.factors_.push_back(Factor{{v}, {}, {}, {}, {}});
  for (const auto& [a, b] : g.primal_.edges) {
    g.pair_index_[{a, b}] = g.factors_.size();
    g.factors_.push_back(Factor{{a, b}, {}, {}, {}, {}});
  }

  auto owner = [&](const std::set<VarId>& scope) -> Factor& {
    if (scope.size() == 1) return g.factors_[*scope.begin()];
    return g.factors_[g.pair_index_.at({*scope.begin(), *scope.rbegin()})];
  };
  for (std::size_t c = 0; c < p.clauses.size(); ++c) {
    Factor& f = owner(p.clauses[c].variables());
    f.clause_ids.push_back(c);
    f.clauses.push_back(p.clauses[c]);
  }
  for (std::size_t w = 0; w < p.weights.size(); ++w) {
    Factor& f = owner(p.weights[w].scope());
    f.weight_ids.push_back(w);
    f.weights.push_back(p.weights[w]);
  }

  g.var_edges_.assign(n, {});
  g.factor_edges_.assign(g.factors_.size(), {});
  for (std::size_t f = 0; f < g.factors_.size(); ++f) {
    for (VarId v : g.factors_[f].scope) {
      g.factor_edges_[f].push_back(g.edges_.size());
      g.var_edges_[v].push_back(g.edges_.size());
      g.edges_.push_back(FactorEdge{v, f});
    }
  }
  return g;
}

inline FactorGraph factorize(const Problem& p, std::optional<VarId> root = std::nullopt) {
  return factorize(std::make_shared<const Problem>(p), root);
}

struct Step {
  NodeRef from;
  NodeRef to;
  std::size_t edge;

  friend bool operator==(const Step&, const Step&) = default;
};

/// Message order for one tree component. `upward` runs from the leaves to
/// the root; `downward` is its exact reverse with every orientation
/// flipped. Steps between consecutive level offsets touch disjoint
/// subtrees and may run concurrently.
struct Schedule {
  VarId root = 0;
  std::vector<Step> upward;
  std::vector<Step> downward;
  std::vector<std::size_t> upward_levels;    // start offsets into `upward`
  std::vector<std::size_t> downward_levels;  // start offsets into `downward`

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

inline Schedule schedule(const FactorGraph& g, VarId root) {
  if (root >= g.num_variables()) throw Error(ErrorCode::UnknownRoot, "root is not a variable node");
  Schedule s;
  s.root = root;
  const auto& adj = g.primal().adjacency;

  // BFS from the root gives parents; heights come from a reverse sweep.
  constexpr VarId none = static_cast<VarId>(-1);
  std::vector<VarId> order{root};
  std::map<VarId, VarId> parent{{root, none}};
  for (std::size_t k = 0; k < order.size(); ++k)
    for (VarId w : adj[order[k]])
      if (!parent.contains(w)) {
        parent[w] = order[k];
        order.push_back(w);
      }
  std::map<VarId, std::size_t> height;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    std::size_t h = 0;
    for (VarId w : adj[*it])
      if (w != parent[*it]) h = std::max(h, height[w] + 1);
    height[*it] = h;
  }
  std::vector<VarId> up = order;
  std::stable_sort(up.begin(), up.end(), [&](VarId a, VarId b) {
    return height[a] != height[b] ? height[a] < height[b] : a < b;
  });

  std::size_t level = static_cast<std::size_t>(-1);
  for (VarId v : up) {
    if (height[v] != level) {
      level = height[v];
      s.upward_levels.push_back(s.upward.size());
    }
    const std::size_t unit = g.unit_factor(v);
    s.upward.push_back(Step{NodeRef::factor(unit), NodeRef::variable(v), g.edge_index(v, unit)});
    if (v == root) continue;
    const std::size_t f = *g.pair_factor(v, parent[v]);
    s.upward.push_back(Step{NodeRef::variable(v), NodeRef::factor(f), g.edge_index(v, f)});
    s.upward.push_back(Step{NodeRef::factor(f), NodeRef::variable(parent[v]), g.edge_index(parent[v], f)});
  }

  for (auto it = s.upward.rbegin(); it != s.upward.rend(); ++it) s.downward.push_back(Step{it->to, it->from, it->edge});
  for (auto it = s.upward_levels.rbegin(); it != s.upward_levels.rend(); ++it) {
    std::size_t end = (it == s.upward_levels.rbegin()) ? s.upward.size() : *(it - 1);
    s.downward_levels.push_back(s.upward.size() - end);
  }
  return s;
}

}  // namespace mpwmi
