#include "cepflow/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <optional>
#include <queue>

namespace cepflow {

namespace {

std::int64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return static_cast<std::int64_t>(x ^ (x >> 31));
}

std::uint64_t tick_seed(std::uint64_t seed, int tick) {
  return static_cast<std::uint64_t>(
      splitmix64(seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(tick + 1))));
}

struct Datum {
  std::uint64_t seq = 0;
  std::int64_t bytes = 0;
  double produced_at = 0.0;
  double oldest_raw = 0.0;
  std::vector<int> steps_in;  // sorted step indices in the provenance chain
};

struct JobInfo {
  double read_ms = 0.0;
  double execute_ms = 0.0;
  double write_ms = 0.0;
  double read_base_ms = 0.0;   // per-input base read (stats sample)
  double write_base_ms = 0.0;  // base write (stats sample)
  std::int64_t bytes_in = 0;
  double oldest_raw = 0.0;
  std::vector<int> steps_in;
};

enum class EvKind { SensorEmit, DatumVisible, StepComplete, EvalTick, MigrationComplete };

struct Ev {
  double t = 0.0;
  std::uint64_t order = 0;
  EvKind kind;
  int a = -1;  // source index / producer index / step index / tick number
  int b = -1;  // worker index for StepComplete
  Datum datum;
  JobInfo job;
};

struct EvLater {
  bool operator()(const Ev& x, const Ev& y) const {
    if (x.t != y.t) return x.t > y.t;
    return x.order > y.order;
  }
};

class Simulator {
 public:
  explicit Simulator(const ScenarioConfig& config)
      : cfg_(config), graph_(build_flow_graph(config.sources, config.steps)) {
    if (cfg_.eval_period_ms <= 0 || cfg_.run_duration_ms <= 0 ||
        cfg_.eval_period_ms >= cfg_.run_duration_ms)
      throw SimError(SimError::Code::InvalidConfig,
                     "eval_period_ms must be positive and below run_duration_ms");
    if (cfg_.migration_bandwidth_bytes_per_ms <= 0)
      throw SimError(SimError::Code::InvalidConfig, "migration bandwidth must be positive");
    if (cfg_.cpu_factor_scale <= 0)
      throw SimError(SimError::Code::InvalidConfig, "cpu_factor_scale must be positive");
    last_step(graph_);  // enforce the single-sink rule
    paths_ = enumerate_paths(graph_);

    workers_ = cfg_.workers;
    std::sort(workers_.begin(), workers_.end(),
              [](const WorkerProfile& a, const WorkerProfile& b) { return a.id < b.id; });
    if (workers_.empty())
      throw SimError(SimError::Code::InvalidConfig, "no workers configured");
    for (int w = 0; w < static_cast<int>(workers_.size()); ++w)
      worker_index_[workers_[w].id] = w;

    for (const auto& st : graph_.steps()) step_ids_.push_back(st.id);
    for (int i = 0; i < static_cast<int>(step_ids_.size()); ++i)
      step_index_[step_ids_[i]] = i;

    producer_ids_ = step_ids_;
    for (const auto& src : graph_.sources()) producer_ids_.push_back(src.id);
    std::sort(producer_ids_.begin(), producer_ids_.end());
    for (int j = 0; j < static_cast<int>(producer_ids_.size()); ++j)
      producer_index_[producer_ids_[j]] = j;

    for (const auto& src : graph_.sources()) {
      auto home = worker_index_.find(src.home_worker);
      if (home == worker_index_.end())
        throw SimError(SimError::Code::InvalidConfig,
                       "source '" + src.id + "' names unknown home worker '" +
                           src.home_worker + "'");
    }
    for (const auto& [src_id, schedule] : cfg_.data_size_schedule) {
      if (!graph_.is_source(src_id))
        throw SimError(SimError::Code::InvalidConfig,
                       "size schedule for unknown source '" + src_id + "'");
      // Points past the horizon simply never fire (durations may be
      // shortened by overrides after the file was validated).
      for (const auto& point : schedule)
        if (point.at_ms < 0 || point.bytes_per_event < 1)
          throw SimError(SimError::Code::InvalidConfig,
                         "size schedule for '" + src_id + "' out of range");
    }

    const int n_steps = static_cast<int>(step_ids_.size());
    const int n_producers = static_cast<int>(producer_ids_.size());
    step_inputs_.resize(n_steps);
    step_own_.resize(n_steps);
    for (int i = 0; i < n_steps; ++i) {
      for (const auto& p : graph_.input_producers(step_ids_[i]))
        step_inputs_[i].push_back(producer_index_.at(p));
      step_own_[i] = producer_index_.at(step_ids_[i]);
    }
    consumers_.resize(n_producers);
    for (int j = 0; j < n_producers; ++j)
      for (const auto& c : graph_.consumers_of(producer_ids_[j]))
        consumers_[j].push_back(step_index_.at(c));

    slots_.resize(n_producers);
    topic_seq_.assign(n_producers, 0);
    step_rt_.resize(n_steps);
    for (int i = 0; i < n_steps; ++i)
      step_rt_[i].consumed.assign(step_inputs_[i].size(), 0);
    worker_rt_.resize(workers_.size());

    code_.assign(n_steps, -1);
    data_.assign(n_producers, -1);
  }

  SimResult run() {
    apply_initial_placement();
    schedule_sensors();
    for (int k = 1; k * cfg_.eval_period_ms < cfg_.run_duration_ms; ++k)
      push(Ev{k * cfg_.eval_period_ms, next_order(), EvKind::EvalTick, k});

    while (!events_.empty()) {
      Ev ev = events_.top();
      if (ev.t > cfg_.run_duration_ms) break;
      events_.pop();
      dispatch(ev);
    }

    SimResult out;
    out.log = std::move(log_);
    out.report = build_report(out.log, graph_, cfg_.run_duration_ms);
    out.report.label = config_label(cfg_.strategy, cfg_.params.device_change_penalty);
    out.report.strategy = strategy_name(cfg_.strategy);
    out.report.seed = cfg_.seed;
    out.report.alpha = cfg_.params.alpha;
    out.report.beta = cfg_.params.beta;
    out.report.device_change_penalty = cfg_.params.device_change_penalty;
    out.report.cpu_factor_scale = cfg_.cpu_factor_scale;
    return out;
  }

 private:
  struct TopicSlot {
    std::optional<Datum> stored;
  };

  struct StepRt {
    bool active = true;
    bool queued = false;
    std::vector<std::uint64_t> consumed;  // per input producer
  };

  struct WorkerRt {
    bool busy = false;
    std::deque<int> queue;
  };

  std::uint64_t next_order() { return order_counter_++; }

  void push(Ev ev) { events_.push(std::move(ev)); }

  double cpu_factor(int w) const { return workers_[w].cpu_factor * cfg_.cpu_factor_scale; }

  std::int64_t source_bytes_at(const RawSource& src, double t) const {
    std::int64_t bytes = src.bytes_per_event;
    auto it = cfg_.data_size_schedule.find(src.id);
    if (it != cfg_.data_size_schedule.end())
      for (const auto& point : it->second)
        if (point.at_ms <= t) bytes = point.bytes_per_event;
    return bytes;
  }

  std::map<NodeId, std::int64_t> source_bytes_now(double t) const {
    std::map<NodeId, std::int64_t> out;
    for (const auto& src : graph_.sources()) out[src.id] = source_bytes_at(src, t);
    return out;
  }

  Placement placement_object() const {
    Placement p;
    for (std::size_t i = 0; i < step_ids_.size(); ++i)
      p.code_loc[step_ids_[i]] = workers_[code_[i]].id;
    for (std::size_t j = 0; j < producer_ids_.size(); ++j)
      p.data_loc[producer_ids_[j]] = workers_[data_[j]].id;
    return p;
  }

  SolveRequest make_request(const StatsWindow& window, std::uint64_t seed,
                            const std::optional<Placement>& previous) const {
    SolveRequest req;
    req.graph = graph_;
    req.paths = paths_;
    req.stats = window;
    req.workers = workers_;
    req.params = cfg_.params;
    req.previous = previous;
    req.seed = seed;
    return req;
  }

  void apply_initial_placement() {
    // The very first distribution happens before any statistics exist, so
    // the request carries unit placeholder stats; round robin ignores them.
    StatsWindow dummy;
    for (const auto& id : step_ids_) {
      StepStats s;
      s.step_id = id;
      s.read_ms = s.execute_ms = s.write_ms = 1.0;
      s.bytes = 1;
      dummy.per_step[id] = s;
    }
    const SolveResult res = solve_crrb(make_request(dummy, cfg_.seed, std::nullopt));
    if (res.status == SolveStatus::Infeasible)
      throw SimError(SimError::Code::SolverInfeasible,
                     "initial round-robin distribution is infeasible");
    adopt_placement(res.placement);
    samples_ = WindowSamples{};
    samples_.window_start_ms = 0.0;
  }

  void adopt_placement(const Placement& p) {
    for (std::size_t i = 0; i < step_ids_.size(); ++i)
      code_[i] = worker_index_.at(p.code_loc.at(step_ids_[i]));
    for (std::size_t j = 0; j < producer_ids_.size(); ++j)
      data_[j] = worker_index_.at(p.data_loc.at(producer_ids_[j]));
  }

  void schedule_sensors() {
    for (std::size_t s = 0; s < graph_.sources().size(); ++s) {
      const auto& src = graph_.sources()[s];
      if (src.period_ms <= cfg_.run_duration_ms)
        push(Ev{src.period_ms, next_order(), EvKind::SensorEmit, static_cast<int>(s)});
    }
  }

  void dispatch(Ev& ev) {
    switch (ev.kind) {
      case EvKind::SensorEmit: on_emit(ev); break;
      case EvKind::DatumVisible: on_visible(ev.a, ev.datum, ev.t); break;
      case EvKind::StepComplete: on_complete(ev); break;
      case EvKind::EvalTick: on_tick(ev); break;
      case EvKind::MigrationComplete: on_migration_done(ev.a, ev.t); break;
    }
  }

  void on_emit(const Ev& ev) {
    const auto& src = graph_.sources()[ev.a];
    const int pid = producer_index_.at(src.id);
    const int home = worker_index_.at(src.home_worker);

    Datum d;
    d.seq = ++topic_seq_[pid];
    d.bytes = source_bytes_at(src, ev.t);
    d.produced_at = ev.t;
    d.oldest_raw = ev.t;

    const bool remote = data_[pid] != home;
    const double write_ms =
        workers_[home].base_write_ms * (remote ? cfg_.params.beta : 1.0);

    LogRecord rec;
    rec.t_ms = ev.t;
    rec.kind = LogKind::SensorEmit;
    rec.node = src.id;
    rec.worker = workers_[home].id;
    rec.bytes = d.bytes;
    rec.write_ms = write_ms;
    log_.push_back(std::move(rec));

    auto& agg = samples_.producers[src.id];
    ++agg.writes;
    agg.bytes_sum += static_cast<double>(d.bytes);

    Ev vis{ev.t + write_ms, next_order(), EvKind::DatumVisible, pid};
    vis.datum = std::move(d);
    push(std::move(vis));

    const double next = ev.t + src.period_ms;
    if (next <= cfg_.run_duration_ms)
      push(Ev{next, next_order(), EvKind::SensorEmit, ev.a});
  }

  void on_visible(int pid, Datum& datum, double t) {
    TopicSlot& slot = slots_[pid];
    if (slot.stored && slot.stored->seq >= datum.seq) return;  // stale arrival
    slot.stored = std::move(datum);
    for (int consumer : consumers_[pid]) try_enqueue(consumer, t);
  }

  void try_enqueue(int step, double t) {
    StepRt& rt = step_rt_[step];
    if (!rt.active || rt.queued) return;
    const auto& inputs = step_inputs_[step];
    for (std::size_t k = 0; k < inputs.size(); ++k) {
      const TopicSlot& slot = slots_[inputs[k]];
      if (!slot.stored || slot.stored->seq <= rt.consumed[k]) return;
    }
    rt.queued = true;
    const int w = code_[step];
    worker_rt_[w].queue.push_back(step);
    if (!worker_rt_[w].busy) start_next(w, t);
  }

  void start_next(int w, double t) {
    WorkerRt& wrk = worker_rt_[w];
    while (!wrk.queue.empty()) {
      const int step = wrk.queue.front();
      wrk.queue.pop_front();
      StepRt& rt = step_rt_[step];
      rt.queued = false;

      // Inputs may have migrated away while the job waited; skip if the
      // conjunction no longer holds, arrival events re-trigger readiness.
      const auto& inputs = step_inputs_[step];
      bool ready = rt.active && code_[step] == w;
      for (std::size_t k = 0; ready && k < inputs.size(); ++k) {
        const TopicSlot& slot = slots_[inputs[k]];
        ready = slot.stored && slot.stored->seq > rt.consumed[k];
      }
      if (!ready) continue;

      JobInfo job;
      job.oldest_raw = std::numeric_limits<double>::infinity();
      std::vector<int> chain;
      for (std::size_t k = 0; k < inputs.size(); ++k) {
        const Datum& d = *slots_[inputs[k]].stored;
        rt.consumed[k] = d.seq;
        job.bytes_in += d.bytes;
        job.oldest_raw = std::min(job.oldest_raw, d.oldest_raw);
        chain.insert(chain.end(), d.steps_in.begin(), d.steps_in.end());
        const bool remote = data_[inputs[k]] != w;
        job.read_ms += workers_[w].base_read_ms * (remote ? cfg_.params.alpha : 1.0);
      }
      chain.push_back(step);
      std::sort(chain.begin(), chain.end());
      chain.erase(std::unique(chain.begin(), chain.end()), chain.end());
      job.steps_in = std::move(chain);

      const StepDef& def = graph_.step(step_ids_[step]);
      job.execute_ms =
          (def.fixed_ms + def.per_byte_ms * static_cast<double>(job.bytes_in)) /
          cpu_factor(w);
      const bool write_remote = data_[step_own_[step]] != w;
      job.write_ms =
          workers_[w].base_write_ms * (write_remote ? cfg_.params.beta : 1.0);
      job.read_base_ms = workers_[w].base_read_ms;
      job.write_base_ms = workers_[w].base_write_ms;

      wrk.busy = true;
      Ev done{t + job.read_ms + job.execute_ms + job.write_ms, next_order(),
              EvKind::StepComplete, step, w};
      done.job = std::move(job);
      push(std::move(done));
      return;
    }
    wrk.busy = false;
  }

  void on_complete(Ev& ev) {
    const int step = ev.a;
    const int w = ev.b;
    const JobInfo& job = ev.job;

    LogRecord rec;
    rec.t_ms = ev.t;
    rec.kind = LogKind::StepExecute;
    rec.node = step_ids_[step];
    rec.worker = workers_[w].id;
    rec.bytes = job.bytes_in;
    rec.read_ms = job.read_ms;
    rec.execute_ms = job.execute_ms;
    rec.write_ms = job.write_ms;
    rec.oldest_raw_ms = job.oldest_raw;
    for (int idx : job.steps_in) rec.contributing_steps.push_back(step_ids_[idx]);
    log_.push_back(std::move(rec));

    auto& agg = samples_.steps[step_ids_[step]];
    ++agg.executions;
    agg.read_base_sum_ms += job.read_base_ms;
    agg.execute_sum_ms += job.execute_ms;
    agg.write_base_sum_ms += job.write_base_ms;
    agg.bytes_sum += job.bytes_in;

    const StepDef& def = graph_.step(step_ids_[step]);
    Datum out;
    const int own = step_own_[step];
    out.seq = ++topic_seq_[own];
    out.bytes = def.output_bytes > 0 ? def.output_bytes : job.bytes_in;
    out.produced_at = ev.t;
    out.oldest_raw = job.oldest_raw;
    out.steps_in = job.steps_in;

    auto& pagg = samples_.producers[step_ids_[step]];
    ++pagg.writes;
    pagg.bytes_sum += static_cast<double>(out.bytes);

    worker_rt_[w].busy = false;

    on_visible(own, out, ev.t);
    try_enqueue(step, ev.t);
    if (!worker_rt_[w].busy) start_next(w, ev.t);
  }

  void on_tick(const Ev& ev) {
    const int k = ev.a;
    samples_.window_end_ms = ev.t;
    const Placement current = placement_object();
    const StatsWindow window = collect_window_stats(
        samples_, prev_window_ ? &*prev_window_ : nullptr, graph_, current, workers_,
        source_bytes_now(ev.t), cfg_.cpu_factor_scale);

    SolveResult res;
    std::string status_text;
    bool reoptimized = true;
    switch (cfg_.strategy) {
      case Strategy::CP:
        res = solve_exact(make_request(window, tick_seed(cfg_.seed, k), current));
        break;
      case Strategy::GA:
        res = solve_ga(make_request(window, tick_seed(cfg_.seed, k), current));
        break;
      case Strategy::LOCAL:
        res = solve_local(make_request(window, tick_seed(cfg_.seed, k), current));
        break;
      case Strategy::CRRB:
        res = solve_crrb(make_request(window, tick_seed(cfg_.seed, k), current));
        break;
      case Strategy::RANDOM:
        // Drawn once at the first evaluation, then held for the whole run.
        if (k == 1) {
          res = solve_random(make_request(window, cfg_.seed, current));
        } else {
          reoptimized = false;
        }
        break;
    }

    int code_changes = 0;
    int data_changes = 0;
    if (reoptimized) {
      if (res.status == SolveStatus::Infeasible)
        throw SimError(SimError::Code::SolverInfeasible,
                       strategy_name(cfg_.strategy) + std::string(" solver found no ") +
                           "feasible placement at t=" + std::to_string(ev.t));
      apply_migrations(res.placement, ev.t, code_changes, data_changes);
      status_text = solve_status_name(res.status);
    } else {
      status_text = "held";
    }

    LogRecord rec;
    rec.t_ms = ev.t;
    rec.kind = LogKind::EvalTick;
    rec.solver_status = status_text;
    rec.solver_work_ms = reoptimized ? res.work_ms : 0.0;
    rec.objective = reoptimized ? res.objective : 0.0;
    rec.code_changes = code_changes;
    rec.data_changes = data_changes;
    log_.push_back(std::move(rec));

    prev_window_ = window;
    samples_ = WindowSamples{};
    samples_.window_start_ms = ev.t;
  }

  void apply_migrations(const Placement& next, double t, int& code_changes,
                        int& data_changes) {
    std::vector<int> new_code(code_.size());
    std::vector<int> new_data(data_.size());
    for (std::size_t i = 0; i < step_ids_.size(); ++i)
      new_code[i] = worker_index_.at(next.code_loc.at(step_ids_[i]));
    for (std::size_t j = 0; j < producer_ids_.size(); ++j)
      new_data[j] = worker_index_.at(next.data_loc.at(producer_ids_[j]));

    // Stored data whose location changed goes in transit; it reappears at
    // the new location after bytes / bandwidth.
    std::vector<double> move_ms(producer_ids_.size(), 0.0);
    for (std::size_t j = 0; j < producer_ids_.size(); ++j) {
      if (new_data[j] == data_[j]) continue;
      ++data_changes;
      TopicSlot& slot = slots_[j];
      if (slot.stored) {
        move_ms[j] =
            static_cast<double>(slot.stored->bytes) / cfg_.migration_bandwidth_bytes_per_ms;
        Ev arrive{t + move_ms[j], next_order(), EvKind::DatumVisible, static_cast<int>(j)};
        arrive.datum = std::move(*slot.stored);
        slot.stored.reset();
        push(std::move(arrive));
      }
    }

    for (std::size_t i = 0; i < step_ids_.size(); ++i) {
      if (new_code[i] == code_[i]) continue;
      ++code_changes;
      StepRt& rt = step_rt_[i];
      if (rt.queued) {
        auto& q = worker_rt_[code_[i]].queue;
        q.erase(std::remove(q.begin(), q.end(), static_cast<int>(i)), q.end());
        rt.queued = false;
      }
      rt.active = false;
      const StepDef& def = graph_.step(step_ids_[i]);
      const double blackout = activation_cost(def, workers_[new_code[i]]) +
                              move_ms[step_own_[i]];
      push(Ev{t + blackout, next_order(), EvKind::MigrationComplete, static_cast<int>(i)});
    }

    code_ = std::move(new_code);
    data_ = std::move(new_data);
  }

  void on_migration_done(int step, double t) {
    LogRecord rec;
    rec.t_ms = t;
    rec.kind = LogKind::MigrationComplete;
    rec.node = step_ids_[step];
    rec.worker = workers_[code_[step]].id;
    log_.push_back(std::move(rec));
    step_rt_[step].active = true;
    try_enqueue(step, t);
  }

  const ScenarioConfig& cfg_;
  FlowGraph graph_;
  std::vector<FlowPath> paths_;
  std::vector<WorkerProfile> workers_;
  std::map<WorkerId, int> worker_index_;
  std::vector<NodeId> step_ids_;
  std::map<NodeId, int> step_index_;
  std::vector<NodeId> producer_ids_;
  std::map<NodeId, int> producer_index_;
  std::vector<std::vector<int>> step_inputs_;  // producer indices per step
  std::vector<int> step_own_;                  // own producer index per step
  std::vector<std::vector<int>> consumers_;    // step indices per producer

  std::vector<TopicSlot> slots_;
  std::vector<std::uint64_t> topic_seq_;
  std::vector<StepRt> step_rt_;
  std::vector<WorkerRt> worker_rt_;
  std::vector<int> code_;
  std::vector<int> data_;

  std::priority_queue<Ev, std::vector<Ev>, EvLater> events_;
  std::uint64_t order_counter_ = 0;

  WindowSamples samples_;
  std::optional<StatsWindow> prev_window_;
  std::vector<LogRecord> log_;
};

}  // namespace

StatsWindow collect_window_stats(const WindowSamples& samples, const StatsWindow* previous,
                                 const FlowGraph& graph, const Placement& placement,
                                 const std::vector<WorkerProfile>& workers,
                                 const std::map<NodeId, std::int64_t>& source_bytes_now,
                                 double cpu_factor_scale) {
  StatsWindow window;
  window.window_start_ms = samples.window_start_ms;
  window.window_end_ms = samples.window_end_ms;

  std::map<WorkerId, const WorkerProfile*> by_id;
  for (const auto& w : workers) by_id[w.id] = &w;

  // Expected datum sizes cascaded through the graph, for steps that have
  // never executed and for producers that wrote nothing this window.
  std::map<NodeId, double> expected_out;
  std::map<NodeId, double> expected_in;
  for (const auto& src : graph.sources()) {
    auto it = source_bytes_now.find(src.id);
    expected_out[src.id] =
        static_cast<double>(it != source_bytes_now.end() ? it->second : src.bytes_per_event);
  }
  for (const auto& id : graph.topo_order()) {
    double in = 0.0;
    for (const auto& p : graph.input_producers(id)) in += expected_out[p];
    expected_in[id] = in;
    const StepDef& def = graph.step(id);
    expected_out[id] = def.output_bytes > 0 ? static_cast<double>(def.output_bytes) : in;
  }

  for (const auto& st : graph.steps()) {
    StepStats stats;
    stats.step_id = st.id;
    auto it = samples.steps.find(st.id);
    if (it != samples.steps.end() && it->second.executions > 0) {
      const auto& s = it->second;
      const double n = static_cast<double>(s.executions);
      stats.read_ms = s.read_base_sum_ms / n;
      stats.execute_ms = s.execute_sum_ms / n;
      stats.write_ms = s.write_base_sum_ms / n;
      // data_bytes is the size processed per event, not the window total;
      // per-event normalization keeps stationary windows stationary for
      // the solver.
      stats.bytes = std::max<std::int64_t>(
          1, static_cast<std::int64_t>(std::llround(static_cast<double>(s.bytes_sum) / n)));
      stats.executions = s.executions;
    } else if (previous && previous->per_step.count(st.id)) {
      stats = previous->per_step.at(st.id);
      stats.executions = 0;
    } else {
      const WorkerProfile& w = *by_id.at(placement.code_loc.at(st.id));
      stats.read_ms = w.base_read_ms;
      stats.write_ms = w.base_write_ms;
      stats.execute_ms = (st.fixed_ms + st.per_byte_ms * expected_in[st.id]) /
                         (w.cpu_factor * cpu_factor_scale);
      stats.bytes = std::max<std::int64_t>(
          1, static_cast<std::int64_t>(expected_in[st.id]));
      stats.executions = 0;
    }
    window.per_step[st.id] = stats;
  }

  auto producer_value = [&](const NodeId& id) {
    auto it = samples.producers.find(id);
    if (it != samples.producers.end() && it->second.writes > 0)
      return it->second.bytes_sum / static_cast<double>(it->second.writes);
    if (previous && previous->producer_bytes.count(id))
      return previous->producer_bytes.at(id);
    return expected_out.at(id);
  };
  for (const auto& src : graph.sources()) window.producer_bytes[src.id] = producer_value(src.id);
  for (const auto& st : graph.steps()) window.producer_bytes[st.id] = producer_value(st.id);

  return window;
}

std::string config_label(Strategy strategy, double device_change_penalty) {
  if (strategy != Strategy::CP) return strategy_name(strategy);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", device_change_penalty);
  std::string text(buf);
  while (text.size() > 3 && text.back() == '0') text.pop_back();
  for (auto& c : text)
    if (c == '.') c = '_';
  return "CP_" + text;
}

SimResult run_simulation(const ScenarioConfig& config) { return Simulator(config).run(); }

}  // namespace cepflow
