#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cepflow/flow_graph.hpp"

namespace cepflow {

struct WorkerProfile {
  WorkerId id;
  double cpu_factor = 1.0;  // 1.0 = baseline speed, 0.5 = halved
  int code_capacity = 1;    // max steps hosted
  double base_read_ms = 1.0;
  double base_write_ms = 1.0;
  double download_ms = 0.0;
  double subscribe_ms = 0.0;

  bool operator==(const WorkerProfile&) const = default;
};

/// Joint assignment: where each step's code runs and where each producer's
/// output datum is stored. Valid placements carry exactly one entry per
/// step in code_loc and one per producer (source or step) in data_loc.
struct Placement {
  std::map<NodeId, WorkerId> code_loc;
  std::map<NodeId, WorkerId> data_loc;

  bool operator==(const Placement&) const = default;
};

/// Measured per-step statistics for one evaluation window.
/// read_ms is the mean time to fetch a single input datum without the
/// remote penalty; write_ms likewise excludes the remote penalty. The
/// penalties are re-applied against a candidate placement by the cost
/// functions below.
struct StepStats {
  NodeId step_id;
  double read_ms = 0.0;
  double execute_ms = 0.0;
  double write_ms = 0.0;
  std::int64_t bytes = 1;  // input bytes processed in the window, clamped >= 1
  std::int64_t executions = 0;

  bool operator==(const StepStats&) const = default;
};

struct StatsWindow {
  double window_start_ms = 0.0;
  double window_end_ms = 0.0;
  std::map<NodeId, StepStats> per_step;
  /// Mean stored datum size per producer over the window; drives the
  /// locality heuristic.
  std::map<NodeId, double> producer_bytes;

  bool operator==(const StatsWindow&) const = default;
};

struct CostParams {
  double alpha = 3.0;                 // remote-read penalty multiplier
  double beta = 3.0;                  // remote-write penalty multiplier
  double device_change_penalty = 1.0; // cost multiplier for relocating a step
  int solver_time_limit_ms = 10000;

  bool operator==(const CostParams&) const = default;
};

class CostError : public std::runtime_error {
 public:
  enum class Code { MissingStats };

  CostError(Code code, NodeId step, std::string message)
      : std::runtime_error(std::move(message)), code_(code), step_(std::move(step)) {}

  Code code() const { return code_; }
  const NodeId& step_id() const { return step_; }

 private:
  Code code_;
  NodeId step_;
};

/// Step latency under a placement: per-input read (alpha-penalized when the
/// input's stored location differs from the executing worker) + execution +
/// write (beta-penalized when the step's own output is stored remotely).
double step_latency(const StepStats& stats, const StepDef& step, const Placement& placement,
                    const CostParams& params, const FlowGraph& graph);

/// Sum of step latencies along the path. Throws CostError{MissingStats}.
double path_latency(const FlowPath& path, const StatsWindow& window,
                    const Placement& placement, const CostParams& params,
                    const FlowGraph& graph);

/// Byte-normalized step cost: step_latency / max(1, bytes).
double step_cost(const StepStats& stats, const StepDef& step, const Placement& placement,
                 const CostParams& params, const FlowGraph& graph);

/// Sum of step costs along the path.
double path_cost(const FlowPath& path, const StatsWindow& window, const Placement& placement,
                 const CostParams& params, const FlowGraph& graph);

/// The path with the highest cost; ties broken by the lexicographically
/// smallest step-id sequence.
std::pair<FlowPath, double> critical_path(const FlowGraph& graph, const StatsWindow& window,
                                          const Placement& placement, const CostParams& params);
std::pair<FlowPath, double> critical_path(const std::vector<FlowPath>& paths,
                                          const StatsWindow& window, const Placement& placement,
                                          const CostParams& params, const FlowGraph& graph);

/// Time to (re)activate a step on a worker: code download + topic
/// subscription. Charged by the simulator on migration only, never part of
/// the optimization objective.
double activation_cost(const StepDef& step, const WorkerProfile& worker);

}  // namespace cepflow
