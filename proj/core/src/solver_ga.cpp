#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>

#include "cepflow/solvers.hpp"
#include "solver_context.hpp"

namespace cepflow {

namespace {

using Clock = std::chrono::steady_clock;
using detail::PlanContext;

using Genome = std::vector<int>;  // code genes for every step, then data genes per producer

struct SplitGenome {
  std::vector<int> code;
  std::vector<int> data;
};

SplitGenome split(const PlanContext& ctx, const Genome& g) {
  SplitGenome s;
  s.code.assign(g.begin(), g.begin() + ctx.n_steps);
  s.data.assign(g.begin() + ctx.n_steps, g.end());
  return s;
}

double fitness_of(const PlanContext& ctx, const Genome& g) {
  const SplitGenome s = split(ctx, g);
  if (!ctx.capacity_ok(s.code)) return 0.0;
  const double cost = ctx.objective(s.code, s.data, /*apply_penalty=*/false).max_path_cost;
  return 1.0 / std::max(cost, 1e-12);
}

/// Capacity-respecting random code genes plus uniform data genes.
Genome random_individual(const PlanContext& ctx, std::mt19937_64& rng) {
  Genome g;
  g.reserve(static_cast<std::size_t>(ctx.n_steps + ctx.n_producers));
  std::vector<int> left = ctx.capacity;
  std::vector<int> open;
  for (int i = 0; i < ctx.n_steps; ++i) {
    open.clear();
    for (int w = 0; w < ctx.n_workers; ++w)
      if (left[w] > 0) open.push_back(w);
    const int pick = open[std::uniform_int_distribution<int>(
        0, static_cast<int>(open.size()) - 1)(rng)];
    --left[pick];
    g.push_back(pick);
  }
  std::uniform_int_distribution<int> any_worker(0, ctx.n_workers - 1);
  for (int j = 0; j < ctx.n_producers; ++j) g.push_back(any_worker(rng));
  return g;
}

}  // namespace

GaDiagnostics solve_ga_detailed(const SolveRequest& req, const GaParams& ga) {
  const auto started = Clock::now();
  GaDiagnostics diag;

  PlanContext ctx(req);
  if (ctx.n_workers == 0 || ctx.total_capacity < ctx.n_steps) {
    diag.result.status = SolveStatus::Infeasible;
    diag.result.elapsed_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - started).count();
    return diag;
  }

  std::mt19937_64 rng(req.seed);
  const int pop_size = std::max(2, ga.population);
  const int elites = std::min(std::max(1, ga.elites), pop_size);

  std::vector<Genome> population;
  population.reserve(static_cast<std::size_t>(pop_size));
  for (int k = 0; k < pop_size; ++k) population.push_back(random_individual(ctx, rng));

  std::vector<double> fitness(static_cast<std::size_t>(pop_size), 0.0);
  Genome best_genome;
  double best_fitness = -1.0;
  std::uint64_t evaluations = 0;

  std::uniform_int_distribution<int> pick_any(0, pop_size - 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> any_worker(0, ctx.n_workers - 1);
  const int genome_len = ctx.n_steps + ctx.n_producers;
  std::uniform_int_distribution<int> any_gene(0, genome_len - 1);

  for (int gen = 0; gen < ga.generations; ++gen) {
    for (int k = 0; k < pop_size; ++k) {
      fitness[k] = fitness_of(ctx, population[k]);
      ++evaluations;
      if (fitness[k] > best_fitness ||
          (fitness[k] == best_fitness && population[k] < best_genome)) {
        best_fitness = fitness[k];
        best_genome = population[k];
      }
    }
    diag.best_fitness_per_generation.push_back(
        *std::max_element(fitness.begin(), fitness.end()));

    if (gen + 1 == ga.generations) break;

    // Rank for elitism: fitness descending, genome ascending on ties.
    std::vector<int> rank(static_cast<std::size_t>(pop_size));
    std::iota(rank.begin(), rank.end(), 0);
    std::sort(rank.begin(), rank.end(), [&](int a, int b) {
      if (fitness[a] != fitness[b]) return fitness[a] > fitness[b];
      return population[a] < population[b];
    });

    std::vector<Genome> next;
    next.reserve(static_cast<std::size_t>(pop_size));
    for (int e = 0; e < elites; ++e) next.push_back(population[rank[e]]);

    while (static_cast<int>(next.size()) < pop_size) {
      const auto tournament = [&]() -> const Genome& {
        const int a = pick_any(rng);
        const int b = pick_any(rng);
        return fitness[a] >= fitness[b] ? population[a] : population[b];
      };
      const Genome& pa = tournament();
      const Genome& pb = tournament();
      Genome child(static_cast<std::size_t>(genome_len));
      for (int g = 0; g < genome_len; ++g)
        child[g] = coin(rng) < 0.5 ? pa[g] : pb[g];
      next.push_back(std::move(child));
    }

    // A quarter of the population is drawn (elites excluded) and each
    // drawn individual mutates one random gene with chance 0.5.
    const int draw = static_cast<int>(ga.mutation_share * pop_size);
    std::vector<int> idx;
    for (int k = elites; k < pop_size; ++k) idx.push_back(k);
    for (int d = 0; d < draw && !idx.empty(); ++d) {
      std::uniform_int_distribution<int> pick(0, static_cast<int>(idx.size()) - 1);
      const int at = pick(rng);
      const int victim = idx[at];
      idx.erase(idx.begin() + at);
      if (coin(rng) < ga.mutation_chance)
        next[victim][any_gene(rng)] = any_worker(rng);
    }

    population = std::move(next);
  }

  SolveResult& out = diag.result;
  if (best_fitness <= 0.0) {
    out.status = SolveStatus::Infeasible;
  } else {
    const SplitGenome s = split(ctx, best_genome);
    out.placement = ctx.to_placement(s.code, s.data);
    out.objective = ctx.objective(s.code, s.data, /*apply_penalty=*/false).max_path_cost;
    out.status = SolveStatus::Optimal;
  }
  // Deterministic effort model: one unit per step visited per evaluation.
  double path_len = 0.0;
  for (const auto& members : ctx.path_steps) path_len += static_cast<double>(members.size());
  out.work_ms = static_cast<double>(evaluations) * (8.0 + path_len) / detail::kWorkUnitsPerMs;
  out.elapsed_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - started).count();
  return diag;
}

SolveResult solve_ga(const SolveRequest& req, const GaParams& ga) {
  return solve_ga_detailed(req, ga).result;
}

SolveResult solve_ga(const SolveRequest& req) { return solve_ga_detailed(req).result; }

}  // namespace cepflow
