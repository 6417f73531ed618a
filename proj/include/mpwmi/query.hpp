#pragma once

// Probability queries answered from a solved graph by recomputing a single
// message of the factor whose scope covers the query.

#include <optional>
#include <set>
#include <vector>

#include "mpwmi/error.hpp"
#include "mpwmi/messages.hpp"
#include "mpwmi/problem.hpp"
#include "mpwmi/solver.hpp"

namespace mpwmi {

/// P(clauses | condition); both are conjunctions of clauses.
struct Query {
  std::vector<Clause> clauses;
  std::vector<Clause> condition;

  std::set<VarId> variables() const {
    std::set<VarId> vs;
    for (const auto* part : {&clauses, &condition})
      for (const auto& c : *part)
        for (VarId v : c.variables()) vs.insert(v);
    return vs;
  }

  friend bool operator==(const Query&, const Query&) = default;
};

namespace detail {

/// Where a query attaches: the unit factor of a single variable, the pair
/// factor of a primal edge, or a new edge joining two variables of
/// different components (which keeps the forest a forest).
struct QueryAnchor {
  std::optional<std::size_t> factor;
  VarId a = 0, b = 0;  // bridge endpoints when `factor` is empty
};

/// Throws NonConformingQuery when the scope is neither.
inline QueryAnchor query_anchor(const FactorGraph& g, const std::set<VarId>& vars) {
  if (vars.size() == 1) return {g.unit_factor(*vars.begin())};
  if (vars.size() == 2) {
    const VarId a = *vars.begin(), b = *vars.rbegin();
    if (auto f = g.pair_factor(a, b)) return {*f};
    if (g.component_of(a) != g.component_of(b)) return {std::nullopt, a, b};
  }
  throw Error(ErrorCode::NonConformingQuery, "query scope is not the scope of a factor");
}

/// Partition function of the component containing factor f after conjoining
/// `extra` to f. Only the message from f to its first scope variable is
/// recomputed.
inline Rational starred_partition(const Solution& sol, std::size_t f, const std::vector<Clause>& extra) {
  const FactorGraph& g = sol.graph();
  const VarId v = g.factor(f).scope.front();
  const std::size_t edge = g.edge_index(v, f);
  std::vector<Piecewise> parts{factor_message(g, sol.messages(), f, v, extra)};
  for (std::size_t e : g.variable_edges(v))
    if (e != edge) parts.push_back(require(sol.messages().to_variable[e]));
  return piecewise_product(parts).integral();
}

/// Joint partition function of the two components of a and b after
/// linking them through a new factor holding only `extra`.
inline Rational bridge_partition(const Solution& sol, VarId a, VarId b, const std::vector<Clause>& extra) {
  const FactorGraph& g = sol.graph();
  Factor bridge;
  bridge.scope = {a, b};
  FactorFrame frame(bridge, a);
  frame.add_clauses(extra);
  const auto& va = sol.problem().variables[a];
  const Piecewise into = factor_to_variable(frame, incoming_product(g, sol.messages(), b, std::nullopt), va.lower,
                                            va.upper);
  return piecewise_product(std::vector<Piecewise>{incoming_product(g, sol.messages(), a, std::nullopt), into})
      .integral();
}

inline Rational anchored_partition(const Solution& sol, const QueryAnchor& at, const std::vector<Clause>& extra) {
  return at.factor ? starred_partition(sol, *at.factor, extra) : bridge_partition(sol, at.a, at.b, extra);
}

}  // namespace detail

/// Scope check only; throws NonConformingQuery.
inline void check_query(const FactorGraph& g, const Query& q) {
  if (q.clauses.empty()) throw Error(ErrorCode::NonConformingQuery, "query has no clauses");
  detail::query_anchor(g, q.variables());
}

/// P(q.clauses | q.condition) from a solved graph.
inline Rational query_probability(const Solution& sol, const Query& q) {
  check_query(sol.graph(), q);
  const FactorGraph& g = sol.graph();
  const auto at = detail::query_anchor(g, q.variables());

  Rational denominator;
  if (at.factor) {
    denominator = sol.component_partition(g.component_of(g.factor(*at.factor).scope.front()));
  } else {
    denominator = sol.component_partition(g.component_of(at.a)) * sol.component_partition(g.component_of(at.b));
  }
  if (!q.condition.empty()) {
    denominator = detail::anchored_partition(sol, at, q.condition);
    if (denominator == 0) throw Error(ErrorCode::ZeroConditionProbability, "condition has probability zero");
  } else if (denominator == 0) {
    throw Error(ErrorCode::ZeroPartition, "partition function is zero");
  }
  std::vector<Clause> joint = q.clauses;
  joint.insert(joint.end(), q.condition.begin(), q.condition.end());
  return detail::anchored_partition(sol, at, joint) / denominator;
}

/// The same probability from fresh solves with the query clauses added to
/// the problem. Used as the cold baseline; `z` saves the solve of the
/// unconditioned denominator when it is already known.
inline Rational cold_query_probability(const Problem& p, const Query& q, const SolveOptions& opts = {},
                                       std::optional<Rational> z = std::nullopt) {
  auto with = [&](const std::vector<Clause>& extra) {
    Problem copy = p;
    copy.clauses.insert(copy.clauses.end(), extra.begin(), extra.end());
    return mp_wmi(copy, opts).partition_function();
  };
  Rational denominator = !q.condition.empty() ? with(q.condition) : z ? *z : mp_wmi(p, opts).partition_function();
  if (denominator == 0)
    throw Error(q.condition.empty() ? ErrorCode::ZeroPartition : ErrorCode::ZeroConditionProbability,
                "query denominator is zero");
  std::vector<Clause> joint = q.clauses;
  joint.insert(joint.end(), q.condition.begin(), q.condition.end());
  return with(joint) / denominator;
}

}  // namespace mpwmi
