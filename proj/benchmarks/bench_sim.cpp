#include <benchmark/benchmark.h>

#include "cepflow/scenario.hpp"
#include "cepflow/simulator.hpp"

using namespace cepflow;

#ifndef CEPFLOW_REPO_DIR
#define CEPFLOW_REPO_DIR "."
#endif

namespace {

ScenarioConfig vehicle(Strategy strategy, double duration_ms) {
  ScenarioConfig cfg =
      load_scenario_file(std::string(CEPFLOW_REPO_DIR) + "/scenarios/vehicle.json");
  cfg.strategy = strategy;
  cfg.run_duration_ms = duration_ms;
  return cfg;
}

}  // namespace

static void BM_SimulateVehicleCrrb(benchmark::State& state) {
  const ScenarioConfig cfg = vehicle(Strategy::CRRB, 1000.0 * state.range(0));
  for (auto _ : state) {
    auto result = run_simulation(cfg);
    benchmark::DoNotOptimize(result);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateVehicleCrrb)->Arg(60)->Arg(120)->Unit(benchmark::kMillisecond);

static void BM_SimulateVehicleCp(benchmark::State& state) {
  ScenarioConfig cfg = vehicle(Strategy::CP, 60000.0);
  cfg.params.solver_time_limit_ms = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto result = run_simulation(cfg);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_SimulateVehicleCp)->Arg(20)->Arg(120)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
