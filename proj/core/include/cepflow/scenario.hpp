#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "cepflow/simulator.hpp"

namespace cepflow {

/// Parse or validation failure, pointing at the offending field (JSON
/// pointer path) or parse location.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string where, std::string message)
      : std::runtime_error(where.empty() ? message : where + ": " + message),
        where_(std::move(where)) {}

  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/// Parses the scenario text (JSON) into a validated config. Unknown keys,
/// missing fields and out-of-range values raise ScenarioError naming the
/// field; the flow itself is validated by building the graph (cycles,
/// unbound topics, duplicate producers, single sink).
ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig load_scenario_file(const std::string& path);

/// Canonical rendering; parse_scenario(render_scenario(c)) == c.
std::string render_scenario(const ScenarioConfig& config);
void save_scenario_file(const std::string& path, const ScenarioConfig& config);

/// Command-line overrides layered on top of a scenario file.
struct RunOverrides {
  std::optional<Strategy> strategy;
  std::optional<std::uint64_t> seed;
  std::optional<double> penalty;
  std::optional<double> cpu_factor;  // multiplies every worker's cpu_factor
  std::optional<double> eval_period_ms;
  std::optional<double> run_duration_ms;
  std::optional<int> time_limit_ms;
};

ScenarioConfig apply_overrides(ScenarioConfig config, const RunOverrides& overrides);

}  // namespace cepflow
