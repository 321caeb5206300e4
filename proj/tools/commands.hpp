#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cepflow/scenario.hpp"

namespace cepflow::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitInternal = 4;

struct RunOptions {
  std::string scenario_path;
  RunOverrides overrides;
  std::string out_dir = "out";
};

/// One simulation; writes <out>/<label>[_cpu..]_s<seed>/{scenario.json,
/// events.jsonl, report.json}. Returns the exit code.
int cmd_run(const RunOptions& opts);

struct SweepOptions {
  std::string scenario_path;
  std::vector<std::string> strategies = {"CP", "GA", "CRRB", "RANDOM", "LOCAL"};
  int seeds = 25;
  std::uint64_t seed_base = 1;
  std::vector<double> penalties = {1.0, 1.25, 1.5, 1.75, 2.0};
  std::vector<double> cpu_factors = {1.0, 0.5};
  std::optional<double> eval_period_ms;
  std::optional<double> run_duration_ms;
  std::optional<int> time_limit_ms;
  std::string out_dir = "out";
  int jobs = 0;  // 0 = hardware concurrency
};

/// Strategy x seed x penalty x cpu-factor cross product plus the three
/// comparison tables: (a) CP penalties, (b) best CP vs heuristics,
/// (c) table (b) under the second cpu factor.
int cmd_sweep(const SweepOptions& opts);

struct ScaleOptions {
  int max_steps = 25;
  int max_workers = 25;
  int time_limit_ms = 10000;
  int seeds = 3;
  std::string out_dir = "out";
};

struct ScaleRow {
  int size = 0;
  int steps = 0;
  int workers = 0;
  int paths = 0;
  double median_first_feasible_ms = 0.0;
  /// Wall time to proven optimality, clamped to the limit when it ran out.
  double median_time_to_optimal_ms = 0.0;
  int optimal_runs = 0;
  int limit_runs = 0;
  double max_elapsed_ms = 0.0;
  std::uint64_t median_nodes = 0;
};

/// Layered fully-connected instances of growing size through solve_exact.
std::vector<ScaleRow> run_scale_experiment(const ScaleOptions& opts);

int cmd_scale(const ScaleOptions& opts);

/// Builds the synthetic layered instance used by the scalability
/// experiment (exposed for tests).
SolveRequest make_scale_instance(int n_steps, int n_workers, std::uint64_t seed,
                                 int time_limit_ms);

/// Label of a run directory: config label plus cpu/seed qualifiers.
std::string run_dir_name(const ScenarioConfig& config);

}  // namespace cepflow::cli
