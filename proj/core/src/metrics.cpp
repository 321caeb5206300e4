#include "cepflow/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

namespace cepflow {

namespace {

using nlohmann::json;

std::string path_key(const std::vector<NodeId>& steps) {
  std::string key;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i > 0) key += '>';
    key += steps[i];
  }
  return key;
}

}  // namespace

MetricsReport build_report(const std::vector<LogRecord>& log, const FlowGraph& graph,
                           double run_duration_ms) {
  if (log.empty())
    throw MetricsError(MetricsError::Code::EmptyLog, "event log is empty");

  MetricsReport report;
  report.run_duration_ms = run_duration_ms;

  for (const auto& r : log) {
    if (r.kind == LogKind::EvalTick) {
      report.warmup_ms = r.t_ms;
      break;
    }
  }

  const double measured_ms = run_duration_ms - report.warmup_ms;
  const double minutes = std::max(measured_ms, 1e-9) / 60000.0;
  const NodeId sink = last_step(graph).id;
  const auto paths = enumerate_paths(graph);

  std::map<std::string, std::int64_t> path_counts;
  for (const auto& p : paths) path_counts[path_key(p.steps)] = 0;
  std::map<std::string, std::int64_t> step_counts;

  double sink_exec_total = 0.0;
  double sink_read_total = 0.0;

  for (const auto& r : log) {
    switch (r.kind) {
      case LogKind::EvalTick:
        report.windows.push_back({r.t_ms, r.solver_status, r.solver_work_ms, r.objective,
                                  r.code_changes, r.data_changes});
        report.placement_code_changes += r.code_changes;
        report.placement_data_changes += r.data_changes;
        break;
      case LogKind::StepExecute: {
        if (r.t_ms < report.warmup_ms) break;
        ++step_counts[r.node];
        if (r.node != sink) break;
        ++report.sink_executions;
        sink_exec_total += r.read_ms + r.execute_ms + r.write_ms;
        sink_read_total += r.read_ms;
        if (r.oldest_raw_ms >= 0.0)
          report.max_raw_delay_ms = std::max(report.max_raw_delay_ms, r.t_ms - r.oldest_raw_ms);
        const std::set<NodeId> chain(r.contributing_steps.begin(),
                                     r.contributing_steps.end());
        for (const auto& p : paths) {
          bool covered = true;
          for (const auto& id : p.steps)
            if (!chain.count(id)) {
              covered = false;
              break;
            }
          if (covered) ++path_counts[path_key(p.steps)];
        }
        break;
      }
      default:
        break;
    }
  }

  report.last_event_per_min = static_cast<double>(report.sink_executions) / minutes;
  if (report.sink_executions > 0) {
    report.last_event_exec_ms = sink_exec_total / static_cast<double>(report.sink_executions);
    report.last_event_read_ms = sink_read_total / static_cast<double>(report.sink_executions);
  }

  double min_rate = std::numeric_limits<double>::infinity();
  double max_rate = 0.0;
  for (const auto& [key, count] : path_counts) {
    const double rate = static_cast<double>(count) / minutes;
    report.path_per_min[key] = rate;
    min_rate = std::min(min_rate, rate);
    max_rate = std::max(max_rate, rate);
  }
  report.min_path_per_min = path_counts.empty() ? 0.0 : min_rate;
  report.max_path_per_min = max_rate;

  for (const auto& [id, count] : step_counts)
    report.per_step_per_min[id] = static_cast<double>(count) / minutes;

  return report;
}

namespace {

json window_to_json(const WindowSolveInfo& w) {
  json j;
  j["t_ms"] = w.t_ms;
  j["status"] = w.status;
  j["solver_work_ms"] = w.solver_work_ms;
  j["objective"] = w.objective;
  j["code_changes"] = w.code_changes;
  j["data_changes"] = w.data_changes;
  return j;
}

WindowSolveInfo window_from_json(const json& j) {
  WindowSolveInfo w;
  w.t_ms = j.at("t_ms").get<double>();
  w.status = j.at("status").get<std::string>();
  w.solver_work_ms = j.at("solver_work_ms").get<double>();
  w.objective = j.at("objective").get<double>();
  w.code_changes = j.at("code_changes").get<int>();
  w.data_changes = j.at("data_changes").get<int>();
  return w;
}

}  // namespace

std::string report_to_json(const MetricsReport& r) {
  json j;
  j["label"] = r.label;
  j["strategy"] = r.strategy;
  j["seed"] = r.seed;
  j["run_duration_ms"] = r.run_duration_ms;
  j["warmup_ms"] = r.warmup_ms;
  j["alpha"] = r.alpha;
  j["beta"] = r.beta;
  j["device_change_penalty"] = r.device_change_penalty;
  j["cpu_factor_scale"] = r.cpu_factor_scale;
  j["sink_executions"] = r.sink_executions;
  j["last_event_per_min"] = r.last_event_per_min;
  j["min_path_per_min"] = r.min_path_per_min;
  j["max_path_per_min"] = r.max_path_per_min;
  j["path_per_min"] = r.path_per_min;
  j["per_step_per_min"] = r.per_step_per_min;
  j["max_raw_delay_ms"] = r.max_raw_delay_ms;
  j["last_event_exec_ms"] = r.last_event_exec_ms;
  j["last_event_read_ms"] = r.last_event_read_ms;
  j["placement_code_changes"] = r.placement_code_changes;
  j["placement_data_changes"] = r.placement_data_changes;
  j["windows"] = json::array();
  for (const auto& w : r.windows) j["windows"].push_back(window_to_json(w));
  return j.dump(2) + "\n";
}

MetricsReport report_from_json(const std::string& text) {
  const json j = json::parse(text);
  MetricsReport r;
  r.label = j.at("label").get<std::string>();
  r.strategy = j.at("strategy").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.run_duration_ms = j.at("run_duration_ms").get<double>();
  r.warmup_ms = j.at("warmup_ms").get<double>();
  r.alpha = j.at("alpha").get<double>();
  r.beta = j.at("beta").get<double>();
  r.device_change_penalty = j.at("device_change_penalty").get<double>();
  r.cpu_factor_scale = j.at("cpu_factor_scale").get<double>();
  r.sink_executions = j.at("sink_executions").get<std::int64_t>();
  r.last_event_per_min = j.at("last_event_per_min").get<double>();
  r.min_path_per_min = j.at("min_path_per_min").get<double>();
  r.max_path_per_min = j.at("max_path_per_min").get<double>();
  r.path_per_min = j.at("path_per_min").get<std::map<std::string, double>>();
  r.per_step_per_min = j.at("per_step_per_min").get<std::map<std::string, double>>();
  r.max_raw_delay_ms = j.at("max_raw_delay_ms").get<double>();
  r.last_event_exec_ms = j.at("last_event_exec_ms").get<double>();
  r.last_event_read_ms = j.at("last_event_read_ms").get<double>();
  r.placement_code_changes = j.at("placement_code_changes").get<int>();
  r.placement_data_changes = j.at("placement_data_changes").get<int>();
  for (const auto& w : j.at("windows")) r.windows.push_back(window_from_json(w));
  return r;
}

const std::vector<std::string>& comparison_metric_names() {
  static const std::vector<std::string> kNames = {
      "min_path_per_min",   "max_path_per_min",       "last_event_per_min",
      "max_raw_delay_ms",   "last_event_exec_ms",     "last_event_read_ms",
      "placement_code_changes", "solver_work_ms_per_window",
  };
  return kNames;
}

namespace {

double metric_value(const MetricsReport& r, const std::string& name) {
  if (name == "min_path_per_min") return r.min_path_per_min;
  if (name == "max_path_per_min") return r.max_path_per_min;
  if (name == "last_event_per_min") return r.last_event_per_min;
  if (name == "max_raw_delay_ms") return r.max_raw_delay_ms;
  if (name == "last_event_exec_ms") return r.last_event_exec_ms;
  if (name == "last_event_read_ms") return r.last_event_read_ms;
  if (name == "placement_code_changes") return static_cast<double>(r.placement_code_changes);
  if (name == "solver_work_ms_per_window") {
    if (r.windows.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& w : r.windows) sum += w.solver_work_ms;
    return sum / static_cast<double>(r.windows.size());
  }
  throw std::out_of_range("unknown metric '" + name + "'");
}

MetricStat stat_of(const std::vector<double>& values) {
  MetricStat s;
  if (values.empty()) return s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(var / static_cast<double>(values.size()));
  return s;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

ComparisonTable compare_strategies(
    const std::map<std::string, std::vector<MetricsReport>>& reports) {
  ComparisonTable table;
  for (const auto& [label, runs] : reports) {
    ComparisonRow row;
    row.label = label;
    row.runs = static_cast<int>(runs.size());
    for (const auto& name : comparison_metric_names()) {
      std::vector<double> values;
      values.reserve(runs.size());
      for (const auto& r : runs) values.push_back(metric_value(r, name));
      row.metrics[name] = stat_of(values);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string comparison_to_csv(const ComparisonTable& table) {
  std::ostringstream out;
  out << "label,runs";
  for (const auto& name : comparison_metric_names())
    out << ',' << name << "_mean," << name << "_std";
  out << '\n';
  for (const auto& row : table.rows) {
    out << row.label << ',' << row.runs;
    for (const auto& name : comparison_metric_names()) {
      const auto& s = row.metrics.at(name);
      out << ',' << format_double(s.mean) << ',' << format_double(s.stddev);
    }
    out << '\n';
  }
  return out.str();
}

std::string comparison_to_json(const ComparisonTable& table) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    json r;
    r["label"] = row.label;
    r["runs"] = row.runs;
    for (const auto& [name, stat] : row.metrics) {
      r["metrics"][name]["mean"] = stat.mean;
      r["metrics"][name]["std"] = stat.stddev;
    }
    rows.push_back(std::move(r));
  }
  json j;
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

}  // namespace cepflow
