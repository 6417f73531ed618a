#pragma once

// Two-pass exact message passing over the factor graph of a forest.

#include <atomic>
#include <chrono>
#include <cstddef>
#include <exception>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "mpwmi/error.hpp"
#include "mpwmi/factor_graph.hpp"
#include "mpwmi/messages.hpp"
#include "mpwmi/piecewise.hpp"

namespace mpwmi {

/// Messages indexed by factor-graph edge, one slot per direction.
struct MessageStore {
  std::vector<std::optional<Piecewise>> to_variable;
  std::vector<std::optional<Piecewise>> to_factor;

  explicit MessageStore(std::size_t edges = 0) : to_variable(edges), to_factor(edges) {}
};

using Clock = std::chrono::steady_clock;

struct SolveOptions {
  std::optional<VarId> root;  // overrides the center of its component
  unsigned jobs = 1;
  std::optional<Clock::time_point> deadline;
};

struct PhaseTimings {
  double upward_ms = 0;
  double downward_ms = 0;
  double integrate_ms = 0;
};

namespace detail {

inline const Piecewise& require(const std::optional<Piecewise>& m) {
  if (!m) throw Error(ErrorCode::MissingInput, "message sent before its inputs were available");
  return *m;
}

/// Product of the factor-to-variable messages at `v`, skipping edge `skip`.
inline Piecewise incoming_product(const FactorGraph& g, const MessageStore& store, VarId v,
                                  std::optional<std::size_t> skip) {
  std::vector<Piecewise> parts;
  for (std::size_t e : g.variable_edges(v))
    if (e != skip) parts.push_back(require(store.to_variable[e]));
  if (parts.empty()) {
    const auto& var = g.problem().variables[v];
    return Piecewise::constant_on(var.lower, var.upper);
  }
  return piecewise_product(parts);
}

inline double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

}  // namespace detail

/// Message of a factor to one of its scope variables, optionally with extra
/// clauses conjoined to the factor.
inline Piecewise factor_message(const FactorGraph& g, const MessageStore& store, std::size_t f, VarId target,
                                const std::vector<Clause>& extra = {}) {
  const Factor& factor = g.factor(f);
  FactorFrame frame(factor, target);
  frame.add_clauses(extra);
  const auto& var = g.problem().variables[target];
  if (factor.is_unit()) return unit_factor_message(frame, var.lower, var.upper);
  const VarId s = factor.other(target);
  return factor_to_variable(frame, detail::require(store.to_factor[g.edge_index(s, f)]), var.lower, var.upper);
}

/// Computes and stores the message of one schedule step. Throws MissingInput
/// when a required incoming message has not been sent yet.
inline void send_message(const FactorGraph& g, MessageStore& store, const Step& step) {
  if (step.from.is_variable()) {
    const auto v = static_cast<VarId>(step.from.index);
    store.to_factor[step.edge] = detail::incoming_product(g, store, v, step.edge);
  } else {
    const auto v = static_cast<VarId>(step.to.index);
    store.to_variable[step.edge] = factor_message(g, store, step.from.index, v);
  }
}

namespace detail {

/// Splits one level of a schedule into independent chains. Upward chains
/// start at a unit-factor step, downward chains end at one.
inline std::vector<std::pair<std::size_t, std::size_t>> level_tasks(const std::vector<Step>& steps, std::size_t begin,
                                                                    std::size_t end, bool upward) {
  std::vector<std::pair<std::size_t, std::size_t>> tasks;
  std::size_t start = begin;
  for (std::size_t k = begin; k < end; ++k) {
    if (upward) {
      if (k > begin && !steps[k].from.is_variable() && steps[k].to.is_variable() &&
          steps[k].from.index == steps[k].to.index) {
        tasks.emplace_back(start, k);
        start = k;
      }
    } else if (steps[k].from.is_variable() && steps[k].from.index == steps[k].to.index) {
      tasks.emplace_back(start, k + 1);
      start = k + 1;
    }
  }
  if (start < end) tasks.emplace_back(start, end);
  return tasks;
}

inline void run_steps(const FactorGraph& g, MessageStore& store, const std::vector<Step>& steps,
                      const std::vector<std::size_t>& levels, bool upward, const SolveOptions& opts) {
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const std::size_t begin = levels[l];
    const std::size_t end = l + 1 < levels.size() ? levels[l + 1] : steps.size();
    const auto tasks = level_tasks(steps, begin, end, upward);
    auto check_deadline = [&] {
      if (opts.deadline && Clock::now() > *opts.deadline) throw Error(ErrorCode::Timeout, "deadline exceeded");
    };
    if (opts.jobs <= 1 || tasks.size() <= 1) {
      for (const auto& [a, b] : tasks) {
        check_deadline();
        for (std::size_t k = a; k < b; ++k) send_message(g, store, steps[k]);
      }
      continue;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
      for (std::size_t t; (t = next++) < tasks.size();) {
        try {
          check_deadline();
          for (std::size_t k = tasks[t].first; k < tasks[t].second; ++k) send_message(g, store, steps[k]);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = tasks.size();
        }
      }
    };
    std::vector<std::jthread> pool;
    const std::size_t n = std::min<std::size_t>(opts.jobs, tasks.size());
    for (std::size_t i = 0; i < n; ++i) pool.emplace_back(worker);
    pool.clear();
    if (failure) std::rethrow_exception(failure);
  }
}

}  // namespace detail

/// Result of a full two-pass solve: every message on every edge.
class Solution {
 public:
  const FactorGraph& graph() const { return graph_; }
  const Problem& problem() const { return graph_.problem(); }
  const MessageStore& messages() const { return store_; }
  const std::vector<Schedule>& schedules() const { return schedules_; }
  const PhaseTimings& timings() const { return timings_; }

  /// Partition function of the whole problem (product over components).
  const Rational& partition_function() const { return z_; }
  const Rational& component_partition(std::size_t c) const { return component_z_.at(c); }

  /// Product of all incoming messages at v, scaled by the other components'
  /// partition functions so that it integrates to Z.
  Piecewise unnormalized_marginal(VarId v) const {
    Piecewise m = detail::incoming_product(graph_, store_, v, std::nullopt);
    return m.scaled(others_z(graph_.component_of(v)));
  }

  Piecewise marginal(VarId v) const {
    if (z_ == 0) throw Error(ErrorCode::ZeroPartition, "partition function is zero");
    return unnormalized_marginal(v).scaled(1 / z_);
  }

  /// E[v^k] under the normalized weight.
  Rational moment(VarId v, unsigned k) const {
    if (z_ == 0) throw Error(ErrorCode::ZeroPartition, "partition function is zero");
    return unnormalized_marginal(v).moment_integral(k) / z_;
  }

  /// Every variable's marginal integrates to the same Z; throws
  /// InconsistentMarginals otherwise.
  void check_consistency() const {
    for (VarId v = 0; v < graph_.num_variables(); ++v)
      if (unnormalized_marginal(v).integral() != z_)
        throw Error(ErrorCode::InconsistentMarginals,
                    "marginal of '" + problem().name(v) + "' does not integrate to the partition function");
  }

  /// Product of the partition functions of all components except `c`.
  Rational others_z(std::size_t c) const {
    Rational r = 1;
    for (std::size_t k = 0; k < component_z_.size(); ++k)
      if (k != c) r *= component_z_[k];
    return r;
  }

 private:
  friend Solution mp_wmi(std::shared_ptr<const Problem>, const SolveOptions&);

  explicit Solution(FactorGraph g) : graph_(std::move(g)), store_(graph_.edges().size()) {}

  FactorGraph graph_;
  MessageStore store_;
  std::vector<Schedule> schedules_;
  std::vector<Rational> component_z_;
  Rational z_;
  PhaseTimings timings_;
};

/// Exact WMI of a forest-structured problem by message passing.
inline Solution mp_wmi(std::shared_ptr<const Problem> problem, const SolveOptions& opts = {}) {
  Solution sol(factorize(std::move(problem), opts.root));
  const FactorGraph& g = sol.graph_;
  for (VarId root : g.roots()) sol.schedules_.push_back(schedule(g, root));

  auto t0 = Clock::now();
  for (const auto& s : sol.schedules_) detail::run_steps(g, sol.store_, s.upward, s.upward_levels, true, opts);
  sol.timings_.upward_ms = detail::elapsed_ms(t0);

  t0 = Clock::now();
  for (const auto& s : sol.schedules_)
    detail::run_steps(g, sol.store_, s.downward, s.downward_levels, false, opts);
  sol.timings_.downward_ms = detail::elapsed_ms(t0);

  t0 = Clock::now();
  sol.z_ = 1;
  for (VarId root : g.roots()) {
    sol.component_z_.push_back(detail::incoming_product(g, sol.store_, root, std::nullopt).integral());
    sol.z_ *= sol.component_z_.back();
  }
  sol.timings_.integrate_ms = detail::elapsed_ms(t0);
  return sol;
}

inline Solution mp_wmi(const Problem& p, const SolveOptions& opts = {}) {
  return mp_wmi(std::make_shared<const Problem>(p), opts);
}

}  // namespace mpwmi
