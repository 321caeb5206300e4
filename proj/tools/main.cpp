#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace cepflow;
using namespace cepflow::cli;

int main(int argc, char** argv) {
  CLI::App app{"CEP flow placement toolkit: simulate code/data placement "
               "strategies for a CEP DAG on edge workers"};
  app.require_subcommand(1);

  // run ----------------------------------------------------------------
  RunOptions run_opts;
  std::string run_strategy;
  double run_penalty = -1, run_cpu = -1, run_eval = -1, run_duration = -1;
  std::int64_t run_seed = -1;
  int run_limit = -1;
  auto* run = app.add_subcommand("run", "Simulate one scenario and write report + event log");
  run->add_option("--scenario", run_opts.scenario_path, "Scenario file (JSON)")->required();
  run->add_option("--strategy", run_strategy, "Override strategy (CP, GA, CRRB, RANDOM, LOCAL)");
  run->add_option("--seed", run_seed, "Override RNG seed");
  run->add_option("--penalty", run_penalty, "Override CP device-change penalty");
  run->add_option("--cpu-factor", run_cpu, "Scale every worker's cpu_factor");
  run->add_option("--eval-period", run_eval, "Override evaluation period (ms)");
  run->add_option("--duration", run_duration, "Override run duration (ms)");
  run->add_option("--time-limit-ms", run_limit, "Override solver time limit (ms)");
  run->add_option("--out", run_opts.out_dir, "Output directory root");

  // sweep --------------------------------------------------------------
  SweepOptions sweep_opts;
  std::string sweep_strategies, sweep_penalties, sweep_cpus;
  double sweep_eval = -1, sweep_duration = -1;
  int sweep_limit = -1;
  auto* sweep = app.add_subcommand(
      "sweep", "Strategy x seed x penalty x cpu-factor cross product with comparison tables");
  sweep->add_option("--scenario", sweep_opts.scenario_path, "Scenario file (JSON)")->required();
  sweep->add_option("--strategies", sweep_strategies,
                    "Comma-separated strategies (default CP,GA,CRRB,RANDOM,LOCAL)");
  sweep->add_option("--seeds", sweep_opts.seeds, "Number of seeds per configuration");
  sweep->add_option("--seed", sweep_opts.seed_base, "First seed of the sweep");
  sweep->add_option("--penalties", sweep_penalties,
                    "Comma-separated CP penalties (default 1.0,1.25,1.5,1.75,2.0)");
  sweep->add_option("--cpu-factors", sweep_cpus, "Comma-separated cpu factors (default 1.0,0.5)");
  sweep->add_option("--eval-period", sweep_eval, "Override evaluation period (ms)");
  sweep->add_option("--duration", sweep_duration, "Override run duration (ms)");
  sweep->add_option("--time-limit-ms", sweep_limit, "Override solver time limit (ms)");
  sweep->add_option("--out", sweep_opts.out_dir, "Output directory root");
  sweep->add_option("--jobs", sweep_opts.jobs, "Parallel simulation jobs (0 = all cores)");

  // scale --------------------------------------------------------------
  ScaleOptions scale_opts;
  auto* scale = app.add_subcommand(
      "scale", "Solver scalability on layered fully-connected flows of growing size");
  scale->add_option("--max-steps", scale_opts.max_steps, "Largest step count");
  scale->add_option("--max-workers", scale_opts.max_workers, "Largest worker count");
  scale->add_option("--time-limit-ms", scale_opts.time_limit_ms, "Solver time limit per size");
  scale->add_option("--seeds", scale_opts.seeds, "Seeds per size (median reported)");
  scale->add_option("--out", scale_opts.out_dir, "Output directory root");

  CLI11_PARSE(app, argc, argv);

  const auto split_doubles = [](const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
      const std::size_t comma = text.find(',', pos);
      const std::string item = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
      if (!item.empty()) out.push_back(std::stod(item));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return out;
  };
  const auto split_strings = [](const std::string& text) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
      const std::size_t comma = text.find(',', pos);
      const std::string item = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
      if (!item.empty()) out.push_back(item);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return out;
  };

  if (run->parsed()) {
    if (!run_strategy.empty()) {
      const auto strategy = strategy_from_string(run_strategy);
      if (!strategy) {
        std::cerr << "error: unknown strategy '" << run_strategy << "'\n";
        return kExitConfigError;
      }
      run_opts.overrides.strategy = strategy;
    }
    if (run_seed >= 0) run_opts.overrides.seed = static_cast<std::uint64_t>(run_seed);
    if (run_penalty >= 0) run_opts.overrides.penalty = run_penalty;
    if (run_cpu >= 0) run_opts.overrides.cpu_factor = run_cpu;
    if (run_eval >= 0) run_opts.overrides.eval_period_ms = run_eval;
    if (run_duration >= 0) run_opts.overrides.run_duration_ms = run_duration;
    if (run_limit >= 0) run_opts.overrides.time_limit_ms = run_limit;
    return cmd_run(run_opts);
  }

  if (sweep->parsed()) {
    if (!sweep_strategies.empty()) sweep_opts.strategies = split_strings(sweep_strategies);
    if (!sweep_penalties.empty()) sweep_opts.penalties = split_doubles(sweep_penalties);
    if (!sweep_cpus.empty()) sweep_opts.cpu_factors = split_doubles(sweep_cpus);
    if (sweep_eval >= 0) sweep_opts.eval_period_ms = sweep_eval;
    if (sweep_duration >= 0) sweep_opts.run_duration_ms = sweep_duration;
    if (sweep_limit >= 0) sweep_opts.time_limit_ms = sweep_limit;
    return cmd_sweep(sweep_opts);
  }

  if (scale->parsed()) return cmd_scale(scale_opts);

  std::cerr << "error: no subcommand\n";
  return kExitConfigError;
}
