#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "cepflow/solvers.hpp"

namespace cepflow::detail {

/// Index-based view of a SolveRequest for fast repeated objective
/// evaluation. Workers, steps and producers are sorted by id so every
/// derived ordering is stable.
struct PlanContext {
  explicit PlanContext(const SolveRequest& req);

  const SolveRequest* req = nullptr;

  std::vector<WorkerProfile> workers;  // sorted by id
  std::vector<NodeId> step_ids;        // sorted (graph order)
  std::vector<NodeId> producer_ids;    // steps + sources, sorted
  std::map<NodeId, int> producer_index;
  std::map<WorkerId, int> worker_index;

  int n_steps = 0;
  int n_producers = 0;
  int n_workers = 0;

  struct StepInfo {
    double read_ms = 0.0;
    double execute_ms = 0.0;
    double write_ms = 0.0;
    double inv_bytes = 1.0;
    int own_data = -1;            // producer index of the step's own output
    std::vector<int> inputs;      // producer indices of the step's inputs
    int prev_worker = -1;         // -1 when no previous placement entry
    std::vector<int> paths;       // path indices containing this step
  };
  std::vector<StepInfo> steps;
  std::vector<std::vector<int>> path_steps;  // per path: member step indices
  std::vector<int> capacity;
  int total_capacity = 0;

  double alpha = 1.0;
  double beta = 1.0;
  double change_penalty = 1.0;
  bool has_previous = false;

  /// consumers[j] = steps reading producer j; owner_step[j] = step index
  /// whose output is producer j, or -1 for raw sources.
  std::vector<std::vector<int>> consumers;
  std::vector<int> owner_step;

  // --- evaluation over index vectors -------------------------------------

  double step_cost(int step, const std::vector<int>& code, const std::vector<int>& data,
                   bool apply_penalty) const {
    const StepInfo& s = steps[step];
    const int w = code[step];
    double read = 0.0;
    for (int j : s.inputs) read += s.read_ms * (data[j] == w ? 1.0 : alpha);
    const double write = s.write_ms * (data[s.own_data] == w ? 1.0 : beta);
    double cost = (read + s.execute_ms + write) * s.inv_bytes;
    if (apply_penalty && has_previous && s.prev_worker >= 0 && w != s.prev_worker)
      cost *= change_penalty;
    return cost;
  }

  ObjectiveBreakdown objective(const std::vector<int>& code, const std::vector<int>& data,
                               bool apply_penalty) const {
    std::vector<double> cost(static_cast<std::size_t>(n_steps));
    for (int i = 0; i < n_steps; ++i) cost[i] = step_cost(i, code, data, apply_penalty);
    ObjectiveBreakdown out;
    for (const auto& members : path_steps) {
      double pc = 0.0;
      for (int i : members) pc += cost[i];
      out.total_path_cost += pc;
      if (pc > out.max_path_cost) out.max_path_cost = pc;
    }
    return out;
  }

  bool capacity_ok(const std::vector<int>& code) const {
    std::vector<int> used(static_cast<std::size_t>(n_workers), 0);
    for (int w : code)
      if (++used[w] > capacity[w]) return false;
    return true;
  }

  Placement to_placement(const std::vector<int>& code, const std::vector<int>& data) const;
  /// Returns false when the placement misses an entry or names an unknown worker.
  bool from_placement(const Placement& p, std::vector<int>& code, std::vector<int>& data) const;

  /// Deterministic capacity-respecting first-fit; empty when impossible.
  std::vector<int> first_fit_code() const;
};

/// Deterministic conversion of a time budget into abstract solver work
/// units, so search cutoffs do not depend on the wall clock. Calibrated a
/// few times below the measured unit throughput so the wall clock stays
/// safely inside the configured limit.
inline constexpr double kWorkUnitsPerMs = 200000.0;

}  // namespace cepflow::detail
