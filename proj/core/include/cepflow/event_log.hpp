#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cepflow/flow_graph.hpp"

namespace cepflow {

enum class LogKind { SensorEmit, StepExecute, EvalTick, MigrationComplete };

std::string log_kind_name(LogKind k);

/// One simulator event, serialized as a single JSON line. StepExecute
/// records carry the full latency breakdown and the provenance needed to
/// recompute every report metric from the log alone.
struct LogRecord {
  double t_ms = 0.0;  // completion time for executions, occurrence time otherwise
  LogKind kind = LogKind::SensorEmit;
  NodeId node;      // source or step id; empty for EvalTick
  WorkerId worker;  // executing / hosting worker

  // SensorEmit and StepExecute
  std::int64_t bytes = 0;  // datum size for emits, consumed input bytes for executions
  double write_ms = 0.0;

  // StepExecute only
  double read_ms = 0.0;
  double execute_ms = 0.0;
  double oldest_raw_ms = -1.0;  // production time of the oldest contributing raw datum
  std::vector<NodeId> contributing_steps;

  // EvalTick only
  std::string solver_status;
  double solver_work_ms = 0.0;
  double objective = 0.0;
  int code_changes = 0;
  int data_changes = 0;

  bool operator==(const LogRecord&) const = default;
};

std::string to_json_line(const LogRecord& record);
LogRecord log_record_from_json(const std::string& line);

void write_event_log(std::ostream& out, const std::vector<LogRecord>& log);
void write_event_log_file(const std::string& path, const std::vector<LogRecord>& log);
std::vector<LogRecord> read_event_log(std::istream& in);
std::vector<LogRecord> read_event_log_file(const std::string& path);

}  // namespace cepflow
