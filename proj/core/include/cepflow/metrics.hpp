#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cepflow/event_log.hpp"
#include "cepflow/flow_graph.hpp"

namespace cepflow {

struct WindowSolveInfo {
  double t_ms = 0.0;
  std::string status;
  double solver_work_ms = 0.0;
  double objective = 0.0;
  int code_changes = 0;
  int data_changes = 0;

  bool operator==(const WindowSolveInfo&) const = default;
};

/// Aggregates of one simulation run. Rates are per minute of virtual time
/// past the warm-up boundary (the first evaluation window runs under the
/// initial round-robin distribution and is excluded from every mean).
struct MetricsReport {
  std::string label;
  std::string strategy;
  std::uint64_t seed = 0;
  double run_duration_ms = 0.0;
  double warmup_ms = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double device_change_penalty = 0.0;
  double cpu_factor_scale = 1.0;

  std::int64_t sink_executions = 0;
  double last_event_per_min = 0.0;
  double min_path_per_min = 0.0;
  double max_path_per_min = 0.0;
  std::map<std::string, double> path_per_min;  // keyed by "step1>step2>..."
  std::map<std::string, double> per_step_per_min;
  double max_raw_delay_ms = 0.0;
  double last_event_exec_ms = 0.0;  // mean read+execute+write of the sink step
  double last_event_read_ms = 0.0;  // mean input-read time of the sink step
  int placement_code_changes = 0;
  int placement_data_changes = 0;
  std::vector<WindowSolveInfo> windows;

  bool operator==(const MetricsReport&) const = default;
};

class MetricsError : public std::runtime_error {
 public:
  enum class Code { EmptyLog };
  MetricsError(Code code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

/// Rebuilds every metric from the event log. A sink execution counts for
/// each path whose member steps all appear in that execution's provenance
/// chain. Throws MetricsError{EmptyLog} on an empty log.
MetricsReport build_report(const std::vector<LogRecord>& log, const FlowGraph& graph,
                           double run_duration_ms);

std::string report_to_json(const MetricsReport& report);
MetricsReport report_from_json(const std::string& text);

struct MetricStat {
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation

  bool operator==(const MetricStat&) const = default;
};

struct ComparisonRow {
  std::string label;
  int runs = 0;
  std::map<std::string, MetricStat> metrics;

  bool operator==(const ComparisonRow&) const = default;
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;

  bool operator==(const ComparisonTable&) const = default;
};

/// Names of the metrics aggregated by compare_strategies, in output order.
const std::vector<std::string>& comparison_metric_names();

/// Mean and standard deviation of each metric per configuration label.
ComparisonTable compare_strategies(
    const std::map<std::string, std::vector<MetricsReport>>& reports);

std::string comparison_to_csv(const ComparisonTable& table);
std::string comparison_to_json(const ComparisonTable& table);

}  // namespace cepflow
