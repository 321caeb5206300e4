#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "cepflow/solvers.hpp"
#include "solver_context.hpp"

namespace cepflow {

namespace {

using Clock = std::chrono::steady_clock;
using detail::PlanContext;

constexpr double kBoundSlack = 1e-9;

double wall_ms(Clock::time_point from) {
  return std::chrono::duration<double, std::milli>(Clock::now() - from).count();
}

/// Depth-first branch and bound over the joint assignment. The lower bound
/// treats every unresolved read/write as local and every unresolved step as
/// unmoved, which is admissible because alpha, beta and the change penalty
/// are all >= 1.
class ExactSearch {
 public:
  ExactSearch(const PlanContext& ctx, double budget_units, Clock::time_point started)
      : ctx_(ctx),
        budget_units_(budget_units),
        code_(static_cast<std::size_t>(ctx.n_steps), -1),
        data_(static_cast<std::size_t>(ctx.n_producers), -1),
        used_(static_cast<std::size_t>(ctx.n_workers), 0),
        cost_lb_(static_cast<std::size_t>(ctx.n_steps), 0.0),
        path_sum_(ctx.path_steps.size(), 0.0) {
    started_ = started;
    spare_capacity_ = ctx.total_capacity;
    for (int i = 0; i < ctx_.n_steps; ++i) {
      cost_lb_[i] = lower_bound_cost(i);
      for (int p : ctx_.steps[i].paths) path_sum_[p] += cost_lb_[i];
    }

    // Variable order: steps in topological order, each preceded by the
    // still-unordered locations of its input data and followed by its own
    // output location. A step's reads are then fully priced by the time
    // its code variable is branched on.
    std::map<NodeId, int> step_index;
    for (int i = 0; i < ctx_.n_steps; ++i) step_index[ctx_.step_ids[i]] = i;
    std::vector<bool> data_ordered(static_cast<std::size_t>(ctx_.n_producers), false);
    const auto order_data = [&](int j) {
      if (data_ordered[j]) return;
      data_ordered[j] = true;
      order_.push_back({VarKind::Data, j});
    };
    for (const NodeId& id : ctx_.req->graph.topo_order()) {
      const int i = step_index.at(id);
      for (int j : ctx_.steps[i].inputs)
        if (ctx_.owner_step[j] < 0) order_data(j);
      order_.push_back({VarKind::Code, i});
      order_data(ctx_.steps[i].own_data);
    }
    for (int j = 0; j < ctx_.n_producers; ++j) order_data(j);
  }

  void seed_incumbent(const std::vector<int>& code, const std::vector<int>& data) {
    consider(code, data);
  }

  void run() { descend(0); }

  bool has_incumbent() const { return have_best_; }
  const std::vector<int>& best_code() const { return best_code_; }
  const std::vector<int>& best_data() const { return best_data_; }
  double best_objective() const { return best_obj_; }
  bool budget_exhausted() const { return budget_out_; }
  double work_units() const { return work_units_; }
  std::uint64_t nodes() const { return nodes_; }
  double first_feasible_wall_ms() const { return first_feasible_ms_; }

 private:
  enum class VarKind { Code, Data };
  struct Var {
    VarKind kind;
    int index;
  };

  double lower_bound_cost(int i) const {
    const auto& s = ctx_.steps[i];
    const int w = code_[i];
    double read = 0.0;
    for (int j : s.inputs) {
      const int d = data_[j];
      const bool remote_known = w >= 0 && d >= 0 && d != w;
      read += s.read_ms * (remote_known ? ctx_.alpha : 1.0);
    }
    const int own = data_[s.own_data];
    const bool write_remote = w >= 0 && own >= 0 && own != w;
    const double write = s.write_ms * (write_remote ? ctx_.beta : 1.0);
    double cost = (read + s.execute_ms + write) * s.inv_bytes;
    if (ctx_.has_previous && s.prev_worker >= 0 && w >= 0 && w != s.prev_worker)
      cost *= ctx_.change_penalty;
    return cost;
  }

  void refresh_steps(const std::vector<int>& affected) {
    for (int i : affected) {
      const double fresh = lower_bound_cost(i);
      const double delta = fresh - cost_lb_[i];
      if (delta != 0.0)
        for (int p : ctx_.steps[i].paths) path_sum_[p] += delta;
      cost_lb_[i] = fresh;
    }
  }

  double bound() const {
    double m = 0.0;
    for (double s : path_sum_) m = std::max(m, s);
    return m;
  }

  void affected_by(const Var& v, std::vector<int>& out) const {
    out.clear();
    if (v.kind == VarKind::Code) {
      out.push_back(v.index);
    } else {
      for (int i : ctx_.consumers[v.index]) out.push_back(i);
      const int owner = ctx_.owner_step[v.index];
      if (owner >= 0) out.push_back(owner);
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
    }
  }

  void candidate_values(const Var& v, std::vector<int>& out) const {
    out.clear();
    if (v.kind == VarKind::Code) {
      for (int w = 0; w < ctx_.n_workers; ++w)
        if (used_[w] < ctx_.capacity[w]) out.push_back(w);
    } else {
      const int owner = ctx_.owner_step[v.index];
      if (owner >= 0 && code_[owner] >= 0) out.push_back(code_[owner]);
      for (int i : ctx_.consumers[v.index])
        if (code_[i] >= 0) out.push_back(code_[i]);
      for (int w = 0; w < ctx_.n_workers; ++w) out.push_back(w);
      // dedupe, keeping first occurrence
      std::vector<int> dedup;
      std::vector<bool> seen(static_cast<std::size_t>(ctx_.n_workers), false);
      for (int w : out)
        if (!seen[w]) {
          seen[w] = true;
          dedup.push_back(w);
        }
      out = std::move(dedup);
    }
  }

  void consider(const std::vector<int>& code, const std::vector<int>& data) {
    const ObjectiveBreakdown eval = ctx_.objective(code, data, /*apply_penalty=*/true);
    const bool better =
        !have_best_ || eval.max_path_cost < best_obj_ - kBoundSlack ||
        (std::abs(eval.max_path_cost - best_obj_) <= kBoundSlack &&
         eval.total_path_cost < best_total_ - kBoundSlack);
    if (better) {
      best_code_ = code;
      best_data_ = data;
      best_obj_ = eval.max_path_cost;
      best_total_ = eval.total_path_cost;
      if (!have_best_) first_feasible_ms_ = wall_ms(started_);
      have_best_ = true;
    }
  }

  void descend(std::size_t depth) {
    if (budget_out_) return;
    if (depth == order_.size()) {
      work_units_ += 2.0 * static_cast<double>(ctx_.n_steps + 1);
      consider(code_, data_);
      return;
    }
    const Var v = order_[depth];
    std::vector<int> values;
    candidate_values(v, values);
    std::vector<int> affected;
    affected_by(v, affected);
    std::vector<double> saved(affected.size());

    // Dynamic value ordering: cheapest resulting bound first, worker index
    // as the tie-break, so the first descent is a steepest greedy dive.
    if (values.size() > 1) {
      std::vector<std::pair<double, int>> scored;
      scored.reserve(values.size());
      for (int w : values) {
        if (v.kind == VarKind::Code)
          code_[v.index] = w;
        else
          data_[v.index] = w;
        for (std::size_t k = 0; k < affected.size(); ++k) saved[k] = cost_lb_[affected[k]];
        refresh_steps(affected);
        scored.emplace_back(bound(), w);
        for (std::size_t k = 0; k < affected.size(); ++k) {
          const int i = affected[k];
          const double delta = saved[k] - cost_lb_[i];
          if (delta != 0.0)
            for (int p : ctx_.steps[i].paths) path_sum_[p] += delta;
          cost_lb_[i] = saved[k];
        }
        work_units_ += 4.0 + static_cast<double>(affected.size() + path_sum_.size());
      }
      if (v.kind == VarKind::Code)
        code_[v.index] = -1;
      else
        data_[v.index] = -1;
      std::sort(scored.begin(), scored.end());
      values.clear();
      for (const auto& [score, w] : scored) values.push_back(w);
    }

    for (int w : values) {
      ++nodes_;
      work_units_ += 16.0 + 8.0 * static_cast<double>(affected.size()) +
                     static_cast<double>(path_sum_.size());
      if (work_units_ > budget_units_) {
        budget_out_ = true;
        return;
      }

      if (v.kind == VarKind::Code) {
        // Feasibility cut: enough spare capacity must remain for the
        // unassigned steps.
        if (spare_capacity_ - 1 < unassigned_steps_excluding_current()) continue;
        code_[v.index] = w;
        ++used_[w];
        --spare_capacity_;
      } else {
        data_[v.index] = w;
      }

      for (std::size_t k = 0; k < affected.size(); ++k) saved[k] = cost_lb_[affected[k]];
      refresh_steps(affected);

      if (!have_best_ || bound() < best_obj_ + kBoundSlack) descend(depth + 1);

      for (std::size_t k = 0; k < affected.size(); ++k) {
        const int i = affected[k];
        const double delta = saved[k] - cost_lb_[i];
        if (delta != 0.0)
          for (int p : ctx_.steps[i].paths) path_sum_[p] += delta;
        cost_lb_[i] = saved[k];
      }
      if (v.kind == VarKind::Code) {
        --used_[w];
        ++spare_capacity_;
        code_[v.index] = -1;
      } else {
        data_[v.index] = -1;
      }
      if (budget_out_) return;
    }
  }

  int unassigned_steps_excluding_current() const {
    int assigned = 0;
    for (int i = 0; i < ctx_.n_steps; ++i) assigned += code_[i] >= 0 ? 1 : 0;
    return ctx_.n_steps - assigned - 1;
  }

  const PlanContext& ctx_;
  double budget_units_;
  std::vector<int> code_, data_;
  std::vector<int> used_;
  int spare_capacity_ = 0;
  std::vector<double> cost_lb_;
  std::vector<double> path_sum_;
  std::vector<Var> order_;

  bool have_best_ = false;
  std::vector<int> best_code_, best_data_;
  double best_obj_ = std::numeric_limits<double>::infinity();
  double best_total_ = std::numeric_limits<double>::infinity();

  double work_units_ = 0.0;
  bool budget_out_ = false;
  std::uint64_t nodes_ = 0;
  Clock::time_point started_{};
  double first_feasible_ms_ = 0.0;
};

std::vector<int> colocated_data(const PlanContext& ctx, const SolveRequest& req,
                                const std::vector<int>& code) {
  std::vector<int> data(static_cast<std::size_t>(ctx.n_producers));
  for (int j = 0; j < ctx.n_producers; ++j) {
    if (ctx.owner_step[j] >= 0) {
      data[j] = code[ctx.owner_step[j]];
    } else if (!ctx.consumers[j].empty()) {
      data[j] = code[ctx.consumers[j].front()];
    } else {
      data[j] = ctx.worker_index.at(req.graph.source(ctx.producer_ids[j]).home_worker);
    }
  }
  return data;
}

}  // namespace

ExactDiagnostics solve_exact_detailed(const SolveRequest& req) {
  const auto started = Clock::now();
  ExactDiagnostics diag;

  PlanContext ctx(req);
  if (ctx.n_workers == 0 || ctx.total_capacity < ctx.n_steps) {
    diag.result.status = SolveStatus::Infeasible;
    diag.result.elapsed_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - started).count();
    return diag;
  }

  const double budget_units =
      static_cast<double>(req.params.solver_time_limit_ms) * detail::kWorkUnitsPerMs;
  ExactSearch search(ctx, budget_units, started);

  // Warm incumbents: the previous placement, round robin, and a greedy
  // first fit with colocated data.
  if (req.previous) {
    std::vector<int> code, data;
    if (ctx.from_placement(*req.previous, code, data) && ctx.capacity_ok(code))
      search.seed_incumbent(code, data);
  }
  {
    std::vector<int> code(static_cast<std::size_t>(ctx.n_steps));
    for (int i = 0; i < ctx.n_steps; ++i) code[i] = i % ctx.n_workers;
    if (ctx.capacity_ok(code)) search.seed_incumbent(code, colocated_data(ctx, req, code));
  }
  {
    std::vector<int> code = ctx.first_fit_code();
    if (!code.empty()) search.seed_incumbent(code, colocated_data(ctx, req, code));
  }
  {
    // The locality greedy is a cheap, often strong incumbent.
    const SolveResult local = solve_local(req);
    std::vector<int> code, data;
    if (local.status == SolveStatus::Optimal &&
        ctx.from_placement(local.placement, code, data) && ctx.capacity_ok(code))
      search.seed_incumbent(code, data);
  }

  search.run();

  diag.result.placement = ctx.to_placement(search.best_code(), search.best_data());
  diag.result.objective = search.best_objective();
  diag.result.status =
      search.budget_exhausted() ? SolveStatus::FeasibleTimeLimit : SolveStatus::Optimal;
  diag.result.work_ms = search.work_units() / detail::kWorkUnitsPerMs;
  diag.result.elapsed_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - started).count();
  diag.first_feasible_wall_ms = search.first_feasible_wall_ms();
  diag.optimal_wall_ms = search.budget_exhausted() ? -1.0 : wall_ms(started);
  diag.nodes_explored = search.nodes();
  return diag;
}

SolveResult solve_exact(const SolveRequest& req) { return solve_exact_detailed(req).result; }

SolveResult brute_force_oracle(const SolveRequest& req) {
  const auto started = Clock::now();
  PlanContext ctx(req);

  const double guard =
      std::pow(static_cast<double>(ctx.n_workers), 2.0 * static_cast<double>(ctx.n_steps));
  const double combos = std::pow(static_cast<double>(ctx.n_workers),
                                 static_cast<double>(ctx.n_steps + ctx.n_producers));
  if (guard > 1e7 || combos > 2e8)
    throw SolverError(SolverError::Code::InstanceTooLarge,
                      "oracle guard exceeded: workers^(2*steps) = " + std::to_string(guard));

  SolveResult out;
  out.status = SolveStatus::Infeasible;
  if (ctx.n_workers == 0 || ctx.total_capacity < ctx.n_steps) {
    out.elapsed_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - started).count();
    return out;
  }

  std::vector<int> code(static_cast<std::size_t>(ctx.n_steps), 0);
  std::vector<int> data(static_cast<std::size_t>(ctx.n_producers), 0);
  double best_obj = std::numeric_limits<double>::infinity();
  double best_total = std::numeric_limits<double>::infinity();
  bool have_best = false;

  const auto advance = [&](std::vector<int>& digits) {
    for (std::size_t k = digits.size(); k-- > 0;) {
      if (++digits[k] < ctx.n_workers) return true;
      digits[k] = 0;
    }
    return false;
  };

  bool more_code = true;
  while (more_code) {
    if (ctx.capacity_ok(code)) {
      std::fill(data.begin(), data.end(), 0);
      bool more_data = true;
      while (more_data) {
        const ObjectiveBreakdown eval = ctx.objective(code, data, /*apply_penalty=*/true);
        if (!have_best || eval.max_path_cost < best_obj ||
            (eval.max_path_cost == best_obj && eval.total_path_cost < best_total)) {
          have_best = true;
          best_obj = eval.max_path_cost;
          best_total = eval.total_path_cost;
          out.placement = ctx.to_placement(code, data);
        }
        more_data = advance(data);
      }
    }
    more_code = advance(code);
  }

  if (have_best) {
    out.status = SolveStatus::Optimal;
    out.objective = best_obj;
  }
  out.elapsed_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - started).count();
  return out;
}

}  // namespace cepflow
