#include "cepflow/event_log.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cepflow {

namespace {

using nlohmann::json;

LogKind kind_from_name(const std::string& name) {
  if (name == "emit") return LogKind::SensorEmit;
  if (name == "exec") return LogKind::StepExecute;
  if (name == "eval") return LogKind::EvalTick;
  if (name == "migration") return LogKind::MigrationComplete;
  throw std::runtime_error("unknown log record kind '" + name + "'");
}

}  // namespace

std::string log_kind_name(LogKind k) {
  switch (k) {
    case LogKind::SensorEmit: return "emit";
    case LogKind::StepExecute: return "exec";
    case LogKind::EvalTick: return "eval";
    case LogKind::MigrationComplete: return "migration";
  }
  return "?";
}

std::string to_json_line(const LogRecord& r) {
  json j;
  j["t"] = r.t_ms;
  j["kind"] = log_kind_name(r.kind);
  if (!r.node.empty()) j["node"] = r.node;
  if (!r.worker.empty()) j["worker"] = r.worker;
  switch (r.kind) {
    case LogKind::SensorEmit:
      j["bytes"] = r.bytes;
      j["write_ms"] = r.write_ms;
      break;
    case LogKind::StepExecute:
      j["bytes"] = r.bytes;
      j["read_ms"] = r.read_ms;
      j["execute_ms"] = r.execute_ms;
      j["write_ms"] = r.write_ms;
      j["oldest_raw_ms"] = r.oldest_raw_ms;
      j["steps_in"] = r.contributing_steps;
      break;
    case LogKind::EvalTick:
      j["status"] = r.solver_status;
      j["solver_work_ms"] = r.solver_work_ms;
      j["objective"] = r.objective;
      j["code_changes"] = r.code_changes;
      j["data_changes"] = r.data_changes;
      break;
    case LogKind::MigrationComplete:
      break;
  }
  return j.dump();
}

LogRecord log_record_from_json(const std::string& line) {
  const json j = json::parse(line);
  LogRecord r;
  r.t_ms = j.at("t").get<double>();
  r.kind = kind_from_name(j.at("kind").get<std::string>());
  if (j.contains("node")) r.node = j.at("node").get<std::string>();
  if (j.contains("worker")) r.worker = j.at("worker").get<std::string>();
  switch (r.kind) {
    case LogKind::SensorEmit:
      r.bytes = j.at("bytes").get<std::int64_t>();
      r.write_ms = j.at("write_ms").get<double>();
      break;
    case LogKind::StepExecute:
      r.bytes = j.at("bytes").get<std::int64_t>();
      r.read_ms = j.at("read_ms").get<double>();
      r.execute_ms = j.at("execute_ms").get<double>();
      r.write_ms = j.at("write_ms").get<double>();
      r.oldest_raw_ms = j.at("oldest_raw_ms").get<double>();
      r.contributing_steps = j.at("steps_in").get<std::vector<NodeId>>();
      break;
    case LogKind::EvalTick:
      r.solver_status = j.at("status").get<std::string>();
      r.solver_work_ms = j.at("solver_work_ms").get<double>();
      r.objective = j.at("objective").get<double>();
      r.code_changes = j.at("code_changes").get<int>();
      r.data_changes = j.at("data_changes").get<int>();
      break;
    case LogKind::MigrationComplete:
      break;
  }
  return r;
}

void write_event_log(std::ostream& out, const std::vector<LogRecord>& log) {
  for (const auto& r : log) out << to_json_line(r) << '\n';
}

void write_event_log_file(const std::string& path, const std::vector<LogRecord>& log) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write event log to '" + path + "'");
  write_event_log(out, log);
}

std::vector<LogRecord> read_event_log(std::istream& in) {
  std::vector<LogRecord> log;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    log.push_back(log_record_from_json(line));
  }
  return log;
}

std::vector<LogRecord> read_event_log_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read event log from '" + path + "'");
  return read_event_log(in);
}

}  // namespace cepflow
