#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cepflow/cost_model.hpp"
#include "cepflow/flow_graph.hpp"

namespace cepflow {

enum class Strategy { CP, GA, CRRB, RANDOM, LOCAL };

std::string strategy_name(Strategy s);
std::optional<Strategy> strategy_from_string(const std::string& name);

enum class SolveStatus { Optimal, FeasibleTimeLimit, Infeasible };

std::string solve_status_name(SolveStatus s);

struct SolveRequest {
  FlowGraph graph;
  std::vector<FlowPath> paths;
  StatsWindow stats;
  std::vector<WorkerProfile> workers;
  CostParams params;
  std::optional<Placement> previous;
  std::uint64_t seed = 0;
};

/// Result of one solver invocation. `objective` is the value the solver
/// optimized: the maximum path cost under the returned placement, with the
/// device-change penalty folded in for the exact solver and the oracle.
/// `elapsed_ms` is wall clock; `work_ms` is a deterministic model of solver
/// effort (same inputs always yield the same value) used wherever outputs
/// must reproduce bit-identically.
struct SolveResult {
  Placement placement;
  double objective = 0.0;
  SolveStatus status = SolveStatus::Infeasible;
  std::int64_t elapsed_ms = 0;
  double work_ms = 0.0;
};

class SolverError : public std::runtime_error {
 public:
  enum class Code { InstanceTooLarge };

  SolverError(Code code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

/// Branch-and-bound search over the joint (code, data) assignment,
/// minimizing the maximum path cost; each step placed away from its
/// previous worker has its cost multiplied by params.device_change_penalty.
/// The time limit is enforced through a deterministic work budget derived
/// from params.solver_time_limit_ms, so identical inputs give identical
/// results.
SolveResult solve_exact(const SolveRequest& req);

struct ExactDiagnostics {
  SolveResult result;
  double first_feasible_wall_ms = 0.0;
  double optimal_wall_ms = -1.0;  // wall time at completion; -1 when the budget ran out
  std::uint64_t nodes_explored = 0;
};

ExactDiagnostics solve_exact_detailed(const SolveRequest& req);

/// Exhaustive enumeration of every valid assignment; same objective as
/// solve_exact. Guarded: workers^(2*steps) must stay within 1e7.
/// Throws SolverError{InstanceTooLarge} past the guard.
SolveResult brute_force_oracle(const SolveRequest& req);

/// Genetic-algorithm parameters; defaults follow the reference
/// configuration (200 individuals, 20 generations, 5 elites, a quarter of
/// the population mutated with chance 0.5).
struct GaParams {
  int population = 200;
  int generations = 20;
  int elites = 5;
  double mutation_share = 0.25;
  double mutation_chance = 0.5;
};

SolveResult solve_ga(const SolveRequest& req);
SolveResult solve_ga(const SolveRequest& req, const GaParams& ga);

struct GaDiagnostics {
  SolveResult result;
  /// Best population fitness at each generation's evaluation point.
  std::vector<double> best_fitness_per_generation;
};

GaDiagnostics solve_ga_detailed(const SolveRequest& req, const GaParams& ga = {});

/// GA fitness of a placement: inverse of the maximum path cost, 0 when the
/// placement violates the assignment or capacity constraints.
double ga_fitness(const SolveRequest& req, const Placement& placement);

/// Round-robin: steps sorted by id dealt cyclically over workers sorted by
/// id; step data colocated with its code, source data on its home worker.
SolveResult solve_crrb(const SolveRequest& req);

/// Seeded uniform random balanced assignment (per-worker step counts differ
/// by at most one, capacities respected). Meant to be drawn once per run.
SolveResult solve_random(const SolveRequest& req);

/// Locality greedy: steps in decreasing order of stored input bytes go to
/// the worker holding the largest share of those bytes; the inputs' data
/// locations are then pulled to that worker. Code capacity is forced to two
/// steps per worker for this strategy.
SolveResult solve_local(const SolveRequest& req);

struct ObjectiveBreakdown {
  double max_path_cost = 0.0;
  double total_path_cost = 0.0;
};

/// Objective of a placement under the request's stats: max and sum over
/// paths of the path cost, optionally multiplying relocated steps' costs by
/// the device-change penalty (relative to req.previous).
ObjectiveBreakdown evaluate_objective(const SolveRequest& req, const Placement& placement,
                                      bool apply_change_penalty);

/// Checks the one-location-per-step / one-location-per-producer constraints
/// and per-worker code capacities.
bool placement_valid(const SolveRequest& req, const Placement& placement,
                     std::string* why = nullptr);

}  // namespace cepflow
