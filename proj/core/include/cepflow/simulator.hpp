#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cepflow/cost_model.hpp"
#include "cepflow/event_log.hpp"
#include "cepflow/flow_graph.hpp"
#include "cepflow/metrics.hpp"
#include "cepflow/solvers.hpp"

namespace cepflow {

struct SizeChangePoint {
  double at_ms = 0.0;
  std::int64_t bytes_per_event = 1;

  bool operator==(const SizeChangePoint&) const = default;
};

struct ScenarioConfig {
  std::string name;
  std::vector<RawSource> sources;
  std::vector<StepDef> steps;
  std::vector<WorkerProfile> workers;
  CostParams params;
  Strategy strategy = Strategy::CP;
  double eval_period_ms = 30000.0;
  double run_duration_ms = 300000.0;
  std::uint64_t seed = 1;
  /// Piecewise-constant bytes_per_event overrides per source, sorted by time.
  std::map<NodeId, std::vector<SizeChangePoint>> data_size_schedule;
  double migration_bandwidth_bytes_per_ms = 10000.0;  // 10 MB/s
  /// Multiplier applied to every worker's cpu_factor (0.5 halves all CPUs).
  double cpu_factor_scale = 1.0;

  bool operator==(const ScenarioConfig&) const = default;
};

struct SimResult {
  MetricsReport report;
  std::vector<LogRecord> log;
};

class SimError : public std::runtime_error {
 public:
  enum class Code { InvalidConfig, SolverInfeasible };
  SimError(Code code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

/// Deterministic discrete-event run: sensors emit on their periods, steps
/// fire when every input topic holds an unconsumed datum, the manager
/// re-optimizes at every evaluation tick, and changed assignments pay
/// activation plus data-movement delays during which the step is inactive.
/// Identical configs produce byte-identical logs and reports.
SimResult run_simulation(const ScenarioConfig& config);

// --- window statistics ----------------------------------------------------

struct StepWindowSamples {
  std::int64_t executions = 0;
  double read_base_sum_ms = 0.0;  // one per-input base-read sample per execution
  double execute_sum_ms = 0.0;
  double write_base_sum_ms = 0.0;
  std::int64_t bytes_sum = 0;
};

struct ProducerWindowSamples {
  std::int64_t writes = 0;
  double bytes_sum = 0.0;
};

struct WindowSamples {
  double window_start_ms = 0.0;
  double window_end_ms = 0.0;
  std::map<NodeId, StepWindowSamples> steps;
  std::map<NodeId, ProducerWindowSamples> producers;
};

/// Folds raw window samples into the StatsWindow a solver consumes. Steps
/// with zero executions carry the previous window's stats forward; with no
/// previous window their stats are synthesized from the static profiles
/// (expected input bytes cascaded through the graph, worker base latencies
/// under the given placement).
StatsWindow collect_window_stats(const WindowSamples& samples, const StatsWindow* previous,
                                 const FlowGraph& graph, const Placement& placement,
                                 const std::vector<WorkerProfile>& workers,
                                 const std::map<NodeId, std::int64_t>& source_bytes_now,
                                 double cpu_factor_scale = 1.0);

/// Report label for one configuration, penalty-qualified for CP
/// ("CP_1_25"), plain strategy name otherwise.
std::string config_label(Strategy strategy, double device_change_penalty);

}  // namespace cepflow
