#include "cepflow/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace cepflow {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& message) {
  throw ScenarioError(where, message);
}

void reject_unknown_keys(const json& j, const std::string& where,
                         const std::set<std::string>& known) {
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) fail(where + "/" + key, "unknown field");
}

template <typename T>
T require(const json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) fail(where + "/" + key, "missing required field");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(where + "/" + key, "wrong type");
  }
}

template <typename T>
T optional_or(const json& j, const std::string& where, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(where + "/" + key, "wrong type");
  }
}

RawSource parse_source(const json& j, const std::string& where) {
  reject_unknown_keys(j, where,
                      {"id", "output_topic", "bytes_per_event", "period_ms", "home_worker",
                       "size_schedule"});
  RawSource s;
  s.id = require<std::string>(j, where, "id");
  s.output_topic = require<std::string>(j, where, "output_topic");
  s.bytes_per_event = require<std::int64_t>(j, where, "bytes_per_event");
  s.period_ms = require<double>(j, where, "period_ms");
  s.home_worker = require<std::string>(j, where, "home_worker");
  if (s.bytes_per_event < 1) fail(where + "/bytes_per_event", "must be >= 1");
  if (s.period_ms <= 0) fail(where + "/period_ms", "must be > 0");
  return s;
}

StepDef parse_step(const json& j, const std::string& where) {
  reject_unknown_keys(j, where,
                      {"id", "input_topics", "output_topic", "fixed_ms", "per_byte_ms",
                       "output_bytes", "label"});
  StepDef s;
  s.id = require<std::string>(j, where, "id");
  s.input_topics = require<std::vector<std::string>>(j, where, "input_topics");
  s.output_topic = require<std::string>(j, where, "output_topic");
  s.fixed_ms = optional_or<double>(j, where, "fixed_ms", 0.0);
  s.per_byte_ms = optional_or<double>(j, where, "per_byte_ms", 0.0);
  s.output_bytes = optional_or<std::int64_t>(j, where, "output_bytes", 0);
  s.label = optional_or<std::string>(j, where, "label", "");
  if (s.input_topics.empty()) fail(where + "/input_topics", "must not be empty");
  if (s.fixed_ms < 0) fail(where + "/fixed_ms", "must be >= 0");
  if (s.per_byte_ms < 0) fail(where + "/per_byte_ms", "must be >= 0");
  if (s.output_bytes < 0) fail(where + "/output_bytes", "must be >= 0");
  return s;
}

WorkerProfile parse_worker(const json& j, const std::string& where) {
  reject_unknown_keys(j, where,
                      {"id", "cpu_factor", "code_capacity", "base_read_ms", "base_write_ms",
                       "download_ms", "subscribe_ms"});
  WorkerProfile w;
  w.id = require<std::string>(j, where, "id");
  w.cpu_factor = optional_or<double>(j, where, "cpu_factor", 1.0);
  w.code_capacity = require<int>(j, where, "code_capacity");
  w.base_read_ms = require<double>(j, where, "base_read_ms");
  w.base_write_ms = require<double>(j, where, "base_write_ms");
  w.download_ms = optional_or<double>(j, where, "download_ms", 0.0);
  w.subscribe_ms = optional_or<double>(j, where, "subscribe_ms", 0.0);
  if (w.cpu_factor <= 0) fail(where + "/cpu_factor", "must be > 0");
  if (w.code_capacity < 1) fail(where + "/code_capacity", "must be >= 1");
  if (w.base_read_ms <= 0) fail(where + "/base_read_ms", "must be > 0");
  if (w.base_write_ms <= 0) fail(where + "/base_write_ms", "must be > 0");
  if (w.download_ms < 0 || w.subscribe_ms < 0)
    fail(where, "download_ms and subscribe_ms must be >= 0");
  return w;
}

CostParams parse_params(const json& j, const std::string& where) {
  reject_unknown_keys(
      j, where, {"alpha", "beta", "device_change_penalty", "solver_time_limit_ms"});
  CostParams p;
  p.alpha = optional_or<double>(j, where, "alpha", 3.0);
  p.beta = optional_or<double>(j, where, "beta", 3.0);
  p.device_change_penalty = optional_or<double>(j, where, "device_change_penalty", 1.0);
  p.solver_time_limit_ms = optional_or<int>(j, where, "solver_time_limit_ms", 10000);
  if (p.alpha < 1) fail(where + "/alpha", "must be >= 1");
  if (p.beta < 1) fail(where + "/beta", "must be >= 1");
  if (p.device_change_penalty < 1) fail(where + "/device_change_penalty", "must be >= 1");
  if (p.solver_time_limit_ms <= 0) fail(where + "/solver_time_limit_ms", "must be > 0");
  return p;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // byte offset -> line/column for a field-precise message
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail("line " + std::to_string(line) + ", column " + std::to_string(col), e.what());
  }

  reject_unknown_keys(j, "",
                      {"name", "seed", "strategy", "eval_period_ms", "run_duration_ms",
                       "migration_bandwidth_bytes_per_ms", "cpu_factor_scale", "cost_params",
                       "workers", "sources", "steps"});

  ScenarioConfig cfg;
  cfg.name = optional_or<std::string>(j, "", "name", "scenario");
  cfg.seed = optional_or<std::uint64_t>(j, "", "seed", 1);
  const auto strategy_text = optional_or<std::string>(j, "", "strategy", "CP");
  const auto strategy = strategy_from_string(strategy_text);
  if (!strategy)
    fail("/strategy", "unknown strategy '" + strategy_text +
                          "' (expected CP, GA, CRRB, RANDOM or LOCAL)");
  cfg.strategy = *strategy;
  cfg.eval_period_ms = optional_or<double>(j, "", "eval_period_ms", 30000.0);
  cfg.run_duration_ms = optional_or<double>(j, "", "run_duration_ms", 300000.0);
  cfg.migration_bandwidth_bytes_per_ms =
      optional_or<double>(j, "", "migration_bandwidth_bytes_per_ms", 10000.0);
  cfg.cpu_factor_scale = optional_or<double>(j, "", "cpu_factor_scale", 1.0);
  if (cfg.eval_period_ms <= 0) fail("/eval_period_ms", "must be > 0");
  if (cfg.run_duration_ms <= cfg.eval_period_ms)
    fail("/run_duration_ms", "must exceed eval_period_ms");
  if (cfg.migration_bandwidth_bytes_per_ms <= 0)
    fail("/migration_bandwidth_bytes_per_ms", "must be > 0");
  if (cfg.cpu_factor_scale <= 0) fail("/cpu_factor_scale", "must be > 0");

  if (j.contains("cost_params")) cfg.params = parse_params(j.at("cost_params"), "/cost_params");

  if (!j.contains("workers") || !j.at("workers").is_array() || j.at("workers").empty())
    fail("/workers", "at least one worker is required");
  std::set<WorkerId> worker_ids;
  for (std::size_t i = 0; i < j.at("workers").size(); ++i) {
    const std::string where = "/workers/" + std::to_string(i);
    WorkerProfile w = parse_worker(j.at("workers")[i], where);
    if (!worker_ids.insert(w.id).second) fail(where + "/id", "duplicate worker id");
    cfg.workers.push_back(std::move(w));
  }

  if (!j.contains("sources") || !j.at("sources").is_array() || j.at("sources").empty())
    fail("/sources", "at least one raw source is required");
  for (std::size_t i = 0; i < j.at("sources").size(); ++i) {
    const std::string where = "/sources/" + std::to_string(i);
    const json& sj = j.at("sources")[i];
    RawSource s = parse_source(sj, where);
    if (!worker_ids.count(s.home_worker))
      fail(where + "/home_worker", "unknown worker '" + s.home_worker + "'");
    if (sj.contains("size_schedule")) {
      std::vector<SizeChangePoint> schedule;
      const json& sched = sj.at("size_schedule");
      if (!sched.is_array()) fail(where + "/size_schedule", "must be an array");
      for (std::size_t k = 0; k < sched.size(); ++k) {
        const std::string pw = where + "/size_schedule/" + std::to_string(k);
        reject_unknown_keys(sched[k], pw, {"at_ms", "bytes_per_event"});
        SizeChangePoint point;
        point.at_ms = require<double>(sched[k], pw, "at_ms");
        point.bytes_per_event = require<std::int64_t>(sched[k], pw, "bytes_per_event");
        if (point.at_ms < 0 || point.at_ms > cfg.run_duration_ms)
          fail(pw + "/at_ms", "outside the run window");
        if (point.bytes_per_event < 1) fail(pw + "/bytes_per_event", "must be >= 1");
        schedule.push_back(point);
      }
      std::sort(schedule.begin(), schedule.end(),
                [](const SizeChangePoint& a, const SizeChangePoint& b) {
                  return a.at_ms < b.at_ms;
                });
      cfg.data_size_schedule[s.id] = std::move(schedule);
    }
    cfg.sources.push_back(std::move(s));
  }

  if (!j.contains("steps") || !j.at("steps").is_array() || j.at("steps").empty())
    fail("/steps", "at least one step is required");
  for (std::size_t i = 0; i < j.at("steps").size(); ++i)
    cfg.steps.push_back(parse_step(j.at("steps")[i], "/steps/" + std::to_string(i)));

  // Full flow validation: graph construction plus the single-sink rule.
  try {
    const FlowGraph graph = build_flow_graph(cfg.sources, cfg.steps);
    last_step(graph);
  } catch (const FlowError& e) {
    fail("/steps", e.what());
  }

  return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(path, "cannot open scenario file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_scenario(buffer.str());
  } catch (const ScenarioError& e) {
    throw ScenarioError(path, e.what());
  }
}

std::string render_scenario(const ScenarioConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  j["seed"] = cfg.seed;
  j["strategy"] = strategy_name(cfg.strategy);
  j["eval_period_ms"] = cfg.eval_period_ms;
  j["run_duration_ms"] = cfg.run_duration_ms;
  j["migration_bandwidth_bytes_per_ms"] = cfg.migration_bandwidth_bytes_per_ms;
  j["cpu_factor_scale"] = cfg.cpu_factor_scale;
  j["cost_params"] = {{"alpha", cfg.params.alpha},
                      {"beta", cfg.params.beta},
                      {"device_change_penalty", cfg.params.device_change_penalty},
                      {"solver_time_limit_ms", cfg.params.solver_time_limit_ms}};
  j["workers"] = json::array();
  for (const auto& w : cfg.workers)
    j["workers"].push_back({{"id", w.id},
                            {"cpu_factor", w.cpu_factor},
                            {"code_capacity", w.code_capacity},
                            {"base_read_ms", w.base_read_ms},
                            {"base_write_ms", w.base_write_ms},
                            {"download_ms", w.download_ms},
                            {"subscribe_ms", w.subscribe_ms}});
  j["sources"] = json::array();
  for (const auto& s : cfg.sources) {
    json sj = {{"id", s.id},
               {"output_topic", s.output_topic},
               {"bytes_per_event", s.bytes_per_event},
               {"period_ms", s.period_ms},
               {"home_worker", s.home_worker}};
    auto it = cfg.data_size_schedule.find(s.id);
    if (it != cfg.data_size_schedule.end() && !it->second.empty()) {
      json sched = json::array();
      for (const auto& point : it->second)
        sched.push_back({{"at_ms", point.at_ms}, {"bytes_per_event", point.bytes_per_event}});
      sj["size_schedule"] = std::move(sched);
    }
    j["sources"].push_back(std::move(sj));
  }
  j["steps"] = json::array();
  for (const auto& st : cfg.steps) {
    json sj = {{"id", st.id},
               {"input_topics", st.input_topics},
               {"output_topic", st.output_topic},
               {"fixed_ms", st.fixed_ms},
               {"per_byte_ms", st.per_byte_ms}};
    if (st.output_bytes > 0) sj["output_bytes"] = st.output_bytes;
    if (!st.label.empty()) sj["label"] = st.label;
    j["steps"].push_back(std::move(sj));
  }
  return j.dump(2) + "\n";
}

void save_scenario_file(const std::string& path, const ScenarioConfig& config) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ScenarioError(path, "cannot write scenario file");
  out << render_scenario(config);
}

ScenarioConfig apply_overrides(ScenarioConfig config, const RunOverrides& overrides) {
  if (overrides.strategy) config.strategy = *overrides.strategy;
  if (overrides.seed) config.seed = *overrides.seed;
  if (overrides.penalty) {
    if (*overrides.penalty < 1) throw ScenarioError("--penalty", "must be >= 1");
    config.params.device_change_penalty = *overrides.penalty;
  }
  if (overrides.cpu_factor) {
    if (*overrides.cpu_factor <= 0) throw ScenarioError("--cpu-factor", "must be > 0");
    config.cpu_factor_scale = *overrides.cpu_factor;
  }
  if (overrides.eval_period_ms) config.eval_period_ms = *overrides.eval_period_ms;
  if (overrides.run_duration_ms) config.run_duration_ms = *overrides.run_duration_ms;
  if (overrides.time_limit_ms) {
    if (*overrides.time_limit_ms <= 0) throw ScenarioError("--time-limit-ms", "must be > 0");
    config.params.solver_time_limit_ms = *overrides.time_limit_ms;
  }
  if (config.eval_period_ms <= 0 || config.run_duration_ms <= config.eval_period_ms)
    throw ScenarioError("--eval-period/--duration",
                        "eval period must be positive and below the run duration");
  return config;
}

}  // namespace cepflow
