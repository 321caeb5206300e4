#include "cepflow/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>

#include "solver_context.hpp"

namespace cepflow {

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::CP: return "CP";
    case Strategy::GA: return "GA";
    case Strategy::CRRB: return "CRRB";
    case Strategy::RANDOM: return "RANDOM";
    case Strategy::LOCAL: return "LOCAL";
  }
  return "?";
}

std::optional<Strategy> strategy_from_string(const std::string& name) {
  if (name == "CP") return Strategy::CP;
  if (name == "GA") return Strategy::GA;
  if (name == "CRRB") return Strategy::CRRB;
  if (name == "RANDOM") return Strategy::RANDOM;
  if (name == "LOCAL") return Strategy::LOCAL;
  return std::nullopt;
}

std::string solve_status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::FeasibleTimeLimit: return "FeasibleTimeLimit";
    case SolveStatus::Infeasible: return "Infeasible";
  }
  return "?";
}

namespace detail {

PlanContext::PlanContext(const SolveRequest& r) : req(&r) {
  workers = r.workers;
  std::sort(workers.begin(), workers.end(),
            [](const WorkerProfile& a, const WorkerProfile& b) { return a.id < b.id; });
  n_workers = static_cast<int>(workers.size());
  for (int w = 0; w < n_workers; ++w) {
    worker_index[workers[w].id] = w;
    capacity.push_back(workers[w].code_capacity);
    total_capacity += workers[w].code_capacity;
  }

  for (const auto& st : r.graph.steps()) step_ids.push_back(st.id);
  n_steps = static_cast<int>(step_ids.size());

  producer_ids = step_ids;
  for (const auto& src : r.graph.sources()) producer_ids.push_back(src.id);
  std::sort(producer_ids.begin(), producer_ids.end());
  n_producers = static_cast<int>(producer_ids.size());
  for (int j = 0; j < n_producers; ++j) producer_index[producer_ids[j]] = j;

  alpha = r.params.alpha;
  beta = r.params.beta;
  change_penalty = r.params.device_change_penalty;
  has_previous = r.previous.has_value();

  consumers.assign(static_cast<std::size_t>(n_producers), {});
  owner_step.assign(static_cast<std::size_t>(n_producers), -1);

  steps.resize(static_cast<std::size_t>(n_steps));
  for (int i = 0; i < n_steps; ++i) {
    const NodeId& id = step_ids[i];
    StepInfo& info = steps[i];
    auto sit = r.stats.per_step.find(id);
    if (sit == r.stats.per_step.end())
      throw CostError(CostError::Code::MissingStats, id,
                      "no statistics for step '" + id + "'");
    info.read_ms = sit->second.read_ms;
    info.execute_ms = sit->second.execute_ms;
    info.write_ms = sit->second.write_ms;
    info.inv_bytes = 1.0 / static_cast<double>(std::max<std::int64_t>(1, sit->second.bytes));
    info.own_data = producer_index.at(id);
    owner_step[info.own_data] = i;
    for (const NodeId& p : r.graph.input_producers(id)) {
      const int j = producer_index.at(p);
      info.inputs.push_back(j);
      consumers[j].push_back(i);
    }
    if (has_previous) {
      auto pit = req->previous->code_loc.find(id);
      if (pit != req->previous->code_loc.end()) {
        auto wit = worker_index.find(pit->second);
        info.prev_worker = wit == worker_index.end() ? -1 : wit->second;
      }
    }
  }
  for (auto& c : consumers) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }

  std::map<NodeId, int> step_index;
  for (int i = 0; i < n_steps; ++i) step_index[step_ids[i]] = i;
  path_steps.reserve(r.paths.size());
  for (std::size_t p = 0; p < r.paths.size(); ++p) {
    std::vector<int> members;
    members.reserve(r.paths[p].steps.size());
    for (const NodeId& id : r.paths[p].steps) {
      const int i = step_index.at(id);
      members.push_back(i);
      steps[i].paths.push_back(static_cast<int>(p));
    }
    path_steps.push_back(std::move(members));
  }
}

Placement PlanContext::to_placement(const std::vector<int>& code,
                                    const std::vector<int>& data) const {
  Placement p;
  for (int i = 0; i < n_steps; ++i) p.code_loc[step_ids[i]] = workers[code[i]].id;
  for (int j = 0; j < n_producers; ++j) p.data_loc[producer_ids[j]] = workers[data[j]].id;
  return p;
}

bool PlanContext::from_placement(const Placement& p, std::vector<int>& code,
                                 std::vector<int>& data) const {
  code.assign(static_cast<std::size_t>(n_steps), -1);
  data.assign(static_cast<std::size_t>(n_producers), -1);
  for (int i = 0; i < n_steps; ++i) {
    auto it = p.code_loc.find(step_ids[i]);
    if (it == p.code_loc.end()) return false;
    auto w = worker_index.find(it->second);
    if (w == worker_index.end()) return false;
    code[i] = w->second;
  }
  for (int j = 0; j < n_producers; ++j) {
    auto it = p.data_loc.find(producer_ids[j]);
    if (it == p.data_loc.end()) return false;
    auto w = worker_index.find(it->second);
    if (w == worker_index.end()) return false;
    data[j] = w->second;
  }
  return true;
}

std::vector<int> PlanContext::first_fit_code() const {
  std::vector<int> code;
  std::vector<int> left = capacity;
  for (int i = 0; i < n_steps; ++i) {
    int chosen = -1;
    for (int w = 0; w < n_workers; ++w)
      if (left[w] > 0) {
        chosen = w;
        break;
      }
    if (chosen < 0) return {};
    --left[chosen];
    code.push_back(chosen);
  }
  return code;
}

}  // namespace detail

using detail::PlanContext;

ObjectiveBreakdown evaluate_objective(const SolveRequest& req, const Placement& placement,
                                      bool apply_change_penalty) {
  PlanContext ctx(req);
  std::vector<int> code, data;
  if (!ctx.from_placement(placement, code, data))
    throw std::out_of_range("placement does not cover every step and producer");
  return ctx.objective(code, data, apply_change_penalty);
}

bool placement_valid(const SolveRequest& req, const Placement& placement, std::string* why) {
  PlanContext ctx(req);
  std::vector<int> code, data;
  if (!ctx.from_placement(placement, code, data)) {
    if (why) *why = "missing or unknown assignment entry";
    return false;
  }
  if (placement.code_loc.size() != static_cast<std::size_t>(ctx.n_steps)) {
    if (why) *why = "extra code_loc entries";
    return false;
  }
  if (placement.data_loc.size() != static_cast<std::size_t>(ctx.n_producers)) {
    if (why) *why = "extra data_loc entries";
    return false;
  }
  if (!ctx.capacity_ok(code)) {
    if (why) *why = "code capacity exceeded";
    return false;
  }
  return true;
}

double ga_fitness(const SolveRequest& req, const Placement& placement) {
  PlanContext ctx(req);
  std::vector<int> code, data;
  if (!ctx.from_placement(placement, code, data)) return 0.0;
  if (!ctx.capacity_ok(code)) return 0.0;
  const double cost = ctx.objective(code, data, /*apply_penalty=*/false).max_path_cost;
  return 1.0 / std::max(cost, 1e-12);
}

namespace {

SolveResult finish(const PlanContext& ctx, std::vector<int> code, std::vector<int> data,
                   bool apply_penalty,
                   std::chrono::steady_clock::time_point started) {
  SolveResult out;
  out.placement = ctx.to_placement(code, data);
  out.objective = ctx.objective(code, data, apply_penalty).max_path_cost;
  out.status = SolveStatus::Optimal;
  out.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();
  return out;
}

SolveResult infeasible(std::chrono::steady_clock::time_point started) {
  SolveResult out;
  out.status = SolveStatus::Infeasible;
  out.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();
  return out;
}

}  // namespace

SolveResult solve_crrb(const SolveRequest& req) {
  const auto started = std::chrono::steady_clock::now();
  PlanContext ctx(req);
  if (ctx.n_workers == 0) return infeasible(started);

  std::vector<int> code(static_cast<std::size_t>(ctx.n_steps));
  for (int i = 0; i < ctx.n_steps; ++i) code[i] = i % ctx.n_workers;
  if (!ctx.capacity_ok(code)) return infeasible(started);

  std::vector<int> data(static_cast<std::size_t>(ctx.n_producers));
  for (int j = 0; j < ctx.n_producers; ++j) {
    if (ctx.owner_step[j] >= 0) {
      data[j] = code[ctx.owner_step[j]];
    } else {
      data[j] = ctx.worker_index.at(req.graph.source(ctx.producer_ids[j]).home_worker);
    }
  }
  return finish(ctx, std::move(code), std::move(data), /*apply_penalty=*/false, started);
}

SolveResult solve_random(const SolveRequest& req) {
  const auto started = std::chrono::steady_clock::now();
  PlanContext ctx(req);
  if (ctx.n_workers == 0 || ctx.total_capacity < ctx.n_steps) return infeasible(started);

  std::mt19937_64 rng(req.seed);

  // Balanced target counts: every worker gets floor(S/W), a random subset
  // gets one extra, then overflow beyond capacity is shifted to the workers
  // with the most spare room.
  const int base = ctx.n_workers > 0 ? ctx.n_steps / ctx.n_workers : 0;
  int extra = ctx.n_steps % ctx.n_workers;
  std::vector<int> order(static_cast<std::size_t>(ctx.n_workers));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> count(static_cast<std::size_t>(ctx.n_workers), base);
  for (int k = 0; k < extra; ++k) ++count[order[k]];

  for (int w = 0; w < ctx.n_workers; ++w) {
    while (count[w] > ctx.capacity[w]) {
      int target = -1, spare_best = 0;
      for (int v = 0; v < ctx.n_workers; ++v) {
        const int spare = ctx.capacity[v] - count[v];
        if (spare > spare_best) {
          spare_best = spare;
          target = v;
        }
      }
      if (target < 0) return infeasible(started);
      --count[w];
      ++count[target];
    }
  }

  std::vector<int> slots;
  slots.reserve(static_cast<std::size_t>(ctx.n_steps));
  for (int w = 0; w < ctx.n_workers; ++w)
    for (int k = 0; k < count[w]; ++k) slots.push_back(w);
  std::shuffle(slots.begin(), slots.end(), rng);

  std::vector<int> code(slots.begin(), slots.end());
  std::vector<int> data(static_cast<std::size_t>(ctx.n_producers));
  for (int j = 0; j < ctx.n_producers; ++j) {
    data[j] = ctx.owner_step[j] >= 0
                  ? code[ctx.owner_step[j]]
                  : ctx.worker_index.at(req.graph.source(ctx.producer_ids[j]).home_worker);
  }
  return finish(ctx, std::move(code), std::move(data), /*apply_penalty=*/false, started);
}

SolveResult solve_local(const SolveRequest& req) {
  const auto started = std::chrono::steady_clock::now();
  PlanContext ctx(req);
  // Capped at two steps per worker for this strategy; a smaller declared
  // capacity still binds.
  constexpr int kLocalCapacity = 2;
  std::vector<int> slots(static_cast<std::size_t>(ctx.n_workers));
  int total_slots = 0;
  for (int w = 0; w < ctx.n_workers; ++w) {
    slots[w] = std::min(kLocalCapacity, ctx.capacity[w]);
    total_slots += slots[w];
  }
  if (ctx.n_workers == 0 || total_slots < ctx.n_steps) return infeasible(started);

  // Working picture of where each producer's datum currently lives.
  std::vector<int> data(static_cast<std::size_t>(ctx.n_producers), -1);
  for (int j = 0; j < ctx.n_producers; ++j) {
    const NodeId& id = ctx.producer_ids[j];
    if (req.previous) {
      auto it = req.previous->data_loc.find(id);
      if (it != req.previous->data_loc.end()) {
        auto w = ctx.worker_index.find(it->second);
        if (w != ctx.worker_index.end()) data[j] = w->second;
      }
    }
    if (data[j] < 0 && ctx.owner_step[j] < 0)
      data[j] = ctx.worker_index.at(req.graph.source(id).home_worker);
  }

  std::vector<double> stored_bytes(static_cast<std::size_t>(ctx.n_producers), 0.0);
  for (int j = 0; j < ctx.n_producers; ++j) {
    auto it = req.stats.producer_bytes.find(ctx.producer_ids[j]);
    if (it != req.stats.producer_bytes.end()) stored_bytes[j] = it->second;
  }

  std::vector<int> step_order(static_cast<std::size_t>(ctx.n_steps));
  std::iota(step_order.begin(), step_order.end(), 0);
  std::vector<double> input_bytes(static_cast<std::size_t>(ctx.n_steps), 0.0);
  for (int i = 0; i < ctx.n_steps; ++i)
    for (int j : ctx.steps[i].inputs) input_bytes[i] += stored_bytes[j];
  std::stable_sort(step_order.begin(), step_order.end(), [&](int a, int b) {
    if (input_bytes[a] != input_bytes[b]) return input_bytes[a] > input_bytes[b];
    return ctx.step_ids[a] < ctx.step_ids[b];
  });

  std::vector<int> code(static_cast<std::size_t>(ctx.n_steps), -1);
  std::vector<int> used(static_cast<std::size_t>(ctx.n_workers), 0);
  std::vector<bool> claimed(static_cast<std::size_t>(ctx.n_producers), false);
  for (int i : step_order) {
    int chosen = -1;
    double best_share = -1.0;
    for (int w = 0; w < ctx.n_workers; ++w) {
      if (used[w] >= slots[w]) continue;
      double share = 0.0;
      for (int j : ctx.steps[i].inputs)
        if (data[j] == w) share += stored_bytes[j];
      if (share > best_share) {
        best_share = share;
        chosen = w;
      }
    }
    if (chosen < 0) return infeasible(started);
    code[i] = chosen;
    ++used[chosen];
    for (int j : ctx.steps[i].inputs) {
      data[j] = chosen;
      claimed[j] = true;
    }
  }

  // Producers no consumer pulled (sink outputs, unconsumed sources): step
  // outputs sit beside their code, source data stays where it was.
  for (int j = 0; j < ctx.n_producers; ++j) {
    if (!claimed[j] && ctx.owner_step[j] >= 0) data[j] = code[ctx.owner_step[j]];
    if (data[j] < 0) data[j] = ctx.owner_step[j] >= 0 ? code[ctx.owner_step[j]] : 0;
  }

  return finish(ctx, std::move(code), std::move(data), /*apply_penalty=*/false, started);
}

}  // namespace cepflow
