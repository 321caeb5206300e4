#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "cepflow/event_log.hpp"
#include "cepflow/metrics.hpp"
#include "cepflow/simulator.hpp"

namespace cepflow::cli {

namespace fs = std::filesystem;

namespace {

std::string trimmed_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  std::string text(buf);
  while (text.size() > 3 && text.back() == '0') text.pop_back();
  for (auto& c : text)
    if (c == '.') c = '_';
  return text;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

SimResult execute_run(const ScenarioConfig& config, const fs::path& out_root,
                      fs::path* run_dir_out = nullptr) {
  SimResult result = run_simulation(config);
  const fs::path run_dir = out_root / run_dir_name(config);
  fs::create_directories(run_dir);
  write_text_file(run_dir / "scenario.json", render_scenario(config));
  write_event_log_file((run_dir / "events.jsonl").string(), result.log);
  write_text_file(run_dir / "report.json", report_to_json(result.report));
  if (run_dir_out) *run_dir_out = run_dir;
  return result;
}

}  // namespace

std::string run_dir_name(const ScenarioConfig& config) {
  std::string name = config_label(config.strategy, config.params.device_change_penalty);
  if (config.cpu_factor_scale != 1.0) name += "_cpu" + trimmed_number(config.cpu_factor_scale);
  name += "_s" + std::to_string(config.seed);
  return name;
}

int cmd_run(const RunOptions& opts) {
  try {
    ScenarioConfig config =
        apply_overrides(load_scenario_file(opts.scenario_path), opts.overrides);
    fs::path run_dir;
    const SimResult result = execute_run(config, opts.out_dir, &run_dir);
    const auto& r = result.report;
    std::cout << "run " << r.label << " seed=" << r.seed
              << " alpha=" << r.alpha << " beta=" << r.beta
              << " penalty=" << r.device_change_penalty
              << " sink_per_min=" << r.last_event_per_min
              << " min_path_per_min=" << r.min_path_per_min
              << " max_raw_delay_ms=" << r.max_raw_delay_ms << "\n"
              << "wrote " << run_dir.string() << "\n";
    return kExitOk;
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const FlowError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const SimError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == SimError::Code::SolverInfeasible ? kExitInfeasible : kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

namespace {

struct SweepJob {
  ScenarioConfig config;
  std::string group;  // label + cpu qualifier
};

}  // namespace

int cmd_sweep(const SweepOptions& opts) {
  try {
    const ScenarioConfig base = load_scenario_file(opts.scenario_path);

    std::vector<SweepJob> jobs;
    for (double cpu : opts.cpu_factors) {
      for (const auto& name : opts.strategies) {
        const auto strategy = strategy_from_string(name);
        if (!strategy) throw ScenarioError("--strategies", "unknown strategy '" + name + "'");
        const std::vector<double> penalties =
            *strategy == Strategy::CP ? opts.penalties : std::vector<double>{1.0};
        for (double penalty : penalties) {
          for (int s = 0; s < opts.seeds; ++s) {
            RunOverrides ov;
            ov.strategy = strategy;
            ov.seed = opts.seed_base + static_cast<std::uint64_t>(s);
            if (*strategy == Strategy::CP) ov.penalty = penalty;
            ov.cpu_factor = cpu;
            ov.eval_period_ms = opts.eval_period_ms;
            ov.run_duration_ms = opts.run_duration_ms;
            ov.time_limit_ms = opts.time_limit_ms;
            SweepJob job;
            job.config = apply_overrides(base, ov);
            job.group = config_label(job.config.strategy,
                                     job.config.params.device_change_penalty) +
                        (cpu != 1.0 ? "_cpu" + trimmed_number(cpu) : "");
            jobs.push_back(std::move(job));
          }
        }
      }
    }

    std::vector<MetricsReport> reports(jobs.size());
    std::vector<std::string> failures(jobs.size());
    std::atomic<std::size_t> cursor{0};
    const unsigned n_threads = opts.jobs > 0
                                   ? static_cast<unsigned>(opts.jobs)
                                   : std::max(1u, std::thread::hardware_concurrency());
    auto worker = [&]() {
      for (;;) {
        const std::size_t k = cursor.fetch_add(1);
        if (k >= jobs.size()) return;
        try {
          reports[k] = execute_run(jobs[k].config, opts.out_dir).report;
        } catch (const std::exception& e) {
          failures[k] = e.what();
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    for (std::size_t k = 0; k < jobs.size(); ++k)
      if (!failures[k].empty())
        throw std::runtime_error("run " + run_dir_name(jobs[k].config) +
                                 " failed: " + failures[k]);

    std::map<std::string, std::vector<MetricsReport>> grouped;
    for (std::size_t k = 0; k < jobs.size(); ++k)
      grouped[jobs[k].group].push_back(reports[k]);

    const ComparisonTable all = compare_strategies(grouped);
    fs::create_directories(opts.out_dir);
    write_text_file(fs::path(opts.out_dir) / "comparison.csv", comparison_to_csv(all));
    write_text_file(fs::path(opts.out_dir) / "comparison.json", comparison_to_json(all));

    const double cpu_a = opts.cpu_factors.empty() ? 1.0 : opts.cpu_factors.front();
    const std::string cpu_a_suffix = cpu_a != 1.0 ? "_cpu" + trimmed_number(cpu_a) : "";

    // (a) CP penalty members against each other.
    std::map<std::string, std::vector<MetricsReport>> table_a;
    for (const auto& [label, runs] : grouped)
      if (label.rfind("CP_", 0) == 0 && label.find("_cpu") == std::string::npos &&
          cpu_a_suffix.empty())
        table_a[label] = runs;
    if (!cpu_a_suffix.empty())
      for (const auto& [label, runs] : grouped)
        if (label.rfind("CP_", 0) == 0 &&
            label.size() > cpu_a_suffix.size() &&
            label.compare(label.size() - cpu_a_suffix.size(), cpu_a_suffix.size(),
                          cpu_a_suffix) == 0)
          table_a[label] = runs;

    // The best CP member (highest mean minimum-path throughput) joins the
    // heuristics in table (b).
    std::string best_cp;
    double best_cp_score = -1.0;
    for (const auto& [label, runs] : table_a) {
      double mean = 0.0;
      for (const auto& r : runs) mean += r.min_path_per_min;
      mean /= std::max<std::size_t>(1, runs.size());
      if (mean > best_cp_score) {
        best_cp_score = mean;
        best_cp = label;
      }
    }

    auto build_strategy_table = [&](const std::string& cpu_suffix)
        -> std::map<std::string, std::vector<MetricsReport>> {
      std::map<std::string, std::vector<MetricsReport>> table;
      for (const auto& name : {"GA", "CRRB", "RANDOM", "LOCAL"}) {
        auto it = grouped.find(name + cpu_suffix);
        if (it != grouped.end()) table[it->first] = it->second;
      }
      if (!best_cp.empty()) {
        // Swap the cpu suffix on the chosen CP label.
        std::string cp_label = best_cp;
        if (!cpu_a_suffix.empty() &&
            cp_label.size() > cpu_a_suffix.size())
          cp_label.erase(cp_label.size() - cpu_a_suffix.size());
        auto it = grouped.find(cp_label + cpu_suffix);
        if (it != grouped.end()) table[it->first] = it->second;
      }
      return table;
    };

    if (!table_a.empty())
      write_text_file(fs::path(opts.out_dir) / "table_a.csv",
                      comparison_to_csv(compare_strategies(table_a)));
    const auto table_b = build_strategy_table(cpu_a_suffix);
    if (!table_b.empty())
      write_text_file(fs::path(opts.out_dir) / "table_b.csv",
                      comparison_to_csv(compare_strategies(table_b)));
    if (opts.cpu_factors.size() > 1) {
      const double cpu_c = opts.cpu_factors[1];
      const std::string suffix = cpu_c != 1.0 ? "_cpu" + trimmed_number(cpu_c) : "";
      const auto table_c = build_strategy_table(suffix);
      if (!table_c.empty())
        write_text_file(fs::path(opts.out_dir) / "table_c.csv",
                        comparison_to_csv(compare_strategies(table_c)));
    }

    std::cout << comparison_to_csv(all);
    return kExitOk;
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const SimError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == SimError::Code::SolverInfeasible ? kExitInfeasible : kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

SolveRequest make_scale_instance(int n_steps, int n_workers, std::uint64_t seed,
                                 int time_limit_ms) {
  std::mt19937_64 rng(seed ^ (0xABCDull * static_cast<std::uint64_t>(n_steps)));
  std::uniform_real_distribution<double> latency(0.5, 8.0);
  std::uniform_int_distribution<std::int64_t> size(64, 65536);

  const int width = std::max(1, static_cast<int>(std::ceil(std::sqrt(n_steps))));

  std::vector<RawSource> sources;
  std::vector<StepDef> steps;
  std::vector<WorkerProfile> workers;
  for (int w = 0; w < n_workers; ++w) {
    WorkerProfile wp;
    wp.id = "w" + std::string(w < 10 ? "0" : "") + std::to_string(w);
    wp.cpu_factor = 1.0;
    wp.code_capacity = (n_steps + n_workers - 1) / n_workers + 1;
    wp.base_read_ms = 1.0;
    wp.base_write_ms = 1.0;
    workers.push_back(std::move(wp));
  }

  const auto step_name = [](int layer, int k) {
    return "s" + std::to_string(layer) + "_" + std::to_string(k);
  };

  std::vector<std::string> prev_topics;
  for (int k = 0; k < width && static_cast<int>(sources.size()) < width; ++k) {
    RawSource src;
    src.id = "src" + std::to_string(k);
    src.output_topic = "raw" + std::to_string(k);
    src.bytes_per_event = size(rng);
    src.period_ms = 100.0;
    src.home_worker = workers[k % n_workers].id;
    prev_topics.push_back(src.output_topic);
    sources.push_back(std::move(src));
  }

  int made = 0;
  int layer = 0;
  while (made < n_steps) {
    std::vector<std::string> layer_topics;
    const int in_layer = std::min(width, n_steps - made);
    for (int k = 0; k < in_layer; ++k) {
      StepDef st;
      st.id = step_name(layer, k);
      st.input_topics = prev_topics;  // tightly connected to the whole previous layer
      st.output_topic = "t_" + st.id;
      st.fixed_ms = latency(rng);
      st.output_bytes = size(rng);
      layer_topics.push_back(st.output_topic);
      steps.push_back(std::move(st));
      ++made;
    }
    prev_topics = std::move(layer_topics);
    ++layer;
  }

  SolveRequest req;
  req.graph = build_flow_graph(sources, steps);
  req.paths = enumerate_paths(req.graph);
  req.workers = std::move(workers);
  req.params.alpha = 2.0;
  req.params.beta = 2.0;
  req.params.device_change_penalty = 1.0;
  req.params.solver_time_limit_ms = time_limit_ms;
  req.seed = seed;

  for (const auto& st : req.graph.steps()) {
    StepStats stats;
    stats.step_id = st.id;
    stats.read_ms = latency(rng);
    stats.execute_ms = latency(rng);
    stats.write_ms = latency(rng);
    stats.bytes = size(rng);
    stats.executions = 1;
    req.stats.per_step[st.id] = stats;
  }
  return req;
}

std::vector<ScaleRow> run_scale_experiment(const ScaleOptions& opts) {
  static const int kLadder[] = {2, 3, 4, 5, 6, 8, 10, 12, 16, 20, 25};
  const int cap = std::min(opts.max_steps, opts.max_workers);

  std::vector<ScaleRow> rows;
  for (int k : kLadder) {
    if (k > cap) break;
    std::vector<double> feasible_ms, optimal_ms;
    std::vector<std::uint64_t> nodes;
    ScaleRow row;
    row.size = k;
    row.steps = k;
    row.workers = k;
    for (int s = 0; s < opts.seeds; ++s) {
      const SolveRequest req =
          make_scale_instance(k, k, static_cast<std::uint64_t>(s + 1), opts.time_limit_ms);
      row.paths = static_cast<int>(req.paths.size());
      const ExactDiagnostics diag = solve_exact_detailed(req);
      feasible_ms.push_back(diag.first_feasible_wall_ms);
      optimal_ms.push_back(diag.optimal_wall_ms >= 0
                               ? std::min<double>(diag.optimal_wall_ms, opts.time_limit_ms)
                               : static_cast<double>(opts.time_limit_ms));
      nodes.push_back(diag.nodes_explored);
      row.max_elapsed_ms =
          std::max(row.max_elapsed_ms, static_cast<double>(diag.result.elapsed_ms));
      if (diag.result.status == SolveStatus::Optimal)
        ++row.optimal_runs;
      else
        ++row.limit_runs;
    }
    const auto median = [](std::vector<double> v) {
      std::sort(v.begin(), v.end());
      return v[v.size() / 2];
    };
    std::sort(nodes.begin(), nodes.end());
    row.median_first_feasible_ms = median(feasible_ms);
    row.median_time_to_optimal_ms = median(optimal_ms);
    row.median_nodes = nodes[nodes.size() / 2];
    rows.push_back(row);
  }
  return rows;
}

int cmd_scale(const ScaleOptions& opts) {
  try {
    const auto rows = run_scale_experiment(opts);

    std::ostringstream csv;
    csv << "size,steps,workers,paths,median_first_feasible_ms,median_time_to_optimal_ms,"
           "optimal_runs,limit_runs,max_elapsed_ms,median_nodes\n";
    for (const auto& r : rows)
      csv << r.size << ',' << r.steps << ',' << r.workers << ',' << r.paths << ','
          << r.median_first_feasible_ms << ',' << r.median_time_to_optimal_ms << ','
          << r.optimal_runs << ',' << r.limit_runs << ',' << r.max_elapsed_ms << ','
          << r.median_nodes << '\n';

    fs::create_directories(opts.out_dir);
    write_text_file(fs::path(opts.out_dir) / "scale.csv", csv.str());
    std::cout << csv.str();
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace cepflow::cli
