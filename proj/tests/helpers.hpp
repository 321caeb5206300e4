#pragma once

// Shared builders and independent oracles for the test suites. The oracles
// deliberately re-derive results from first principles (recursive
// enumeration, direct summation) instead of calling the library paths they
// check.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cepflow/flow_graph.hpp"
#include "cepflow/solvers.hpp"

namespace testutil {

using namespace cepflow;

inline RawSource source(std::string id, std::string topic, std::string home,
                        std::int64_t bytes = 64, double period_ms = 100.0) {
  RawSource s;
  s.id = std::move(id);
  s.output_topic = std::move(topic);
  s.bytes_per_event = bytes;
  s.period_ms = period_ms;
  s.home_worker = std::move(home);
  return s;
}

inline StepDef step(std::string id, std::vector<std::string> inputs, std::string output,
                    double fixed_ms = 1.0, double per_byte_ms = 0.0,
                    std::int64_t output_bytes = 0) {
  StepDef s;
  s.id = std::move(id);
  s.input_topics = std::move(inputs);
  s.output_topic = std::move(output);
  s.fixed_ms = fixed_ms;
  s.per_byte_ms = per_byte_ms;
  s.output_bytes = output_bytes;
  return s;
}

inline WorkerProfile worker(std::string id, int capacity = 4, double read_ms = 1.0,
                            double write_ms = 1.0, double cpu = 1.0) {
  WorkerProfile w;
  w.id = std::move(id);
  w.cpu_factor = cpu;
  w.code_capacity = capacity;
  w.base_read_ms = read_ms;
  w.base_write_ms = write_ms;
  return w;
}

inline StepStats stats(std::string id, double read, double exec, double write,
                       std::int64_t bytes) {
  StepStats s;
  s.step_id = std::move(id);
  s.read_ms = read;
  s.execute_ms = exec;
  s.write_ms = write;
  s.bytes = bytes;
  s.executions = 1;
  return s;
}

/// Chain: src -> s1 -> s2 -> ... -> sN via topics t0..tN.
inline FlowGraph chain_graph(int n_steps) {
  std::vector<RawSource> sources = {source("src", "t0", "w0")};
  std::vector<StepDef> steps;
  for (int i = 1; i <= n_steps; ++i)
    steps.push_back(step("s" + std::to_string(i), {"t" + std::to_string(i - 1)},
                         "t" + std::to_string(i)));
  return build_flow_graph(sources, steps);
}

/// Diamond: src -> a -> {b, c} -> d.
inline FlowGraph diamond_graph() {
  std::vector<RawSource> sources = {source("src", "raw", "w0")};
  std::vector<StepDef> steps = {
      step("a", {"raw"}, "ta"),
      step("b", {"ta"}, "tb"),
      step("c", {"ta"}, "tc"),
      step("d", {"tb", "tc"}, "td"),
  };
  return build_flow_graph(sources, steps);
}

/// Layered graph: `layers` layers of `width` steps, fully connected between
/// consecutive layers, each first-layer step fed by its own source.
inline FlowGraph layered_graph(int layers, int width) {
  std::vector<RawSource> sources;
  std::vector<StepDef> steps;
  std::vector<std::string> prev;
  for (int k = 0; k < width; ++k) {
    sources.push_back(source("src" + std::to_string(k), "raw" + std::to_string(k), "w0"));
    prev.push_back("raw" + std::to_string(k));
  }
  for (int layer = 0; layer < layers; ++layer) {
    std::vector<std::string> topics;
    for (int k = 0; k < width; ++k) {
      const std::string id = "s" + std::to_string(layer) + "_" + std::to_string(k);
      steps.push_back(step(id, prev, "t_" + id));
      topics.push_back("t_" + id);
    }
    prev = topics;
  }
  return build_flow_graph(sources, steps);
}

// --- independent path oracle ----------------------------------------------

/// Recursive simple-path enumeration written against adjacency sets only;
/// returns the set of step-id sequences from source-adjacent steps to sinks.
inline std::set<std::vector<NodeId>> oracle_paths(const FlowGraph& g) {
  std::map<NodeId, std::set<NodeId>> next;
  std::set<NodeId> has_step_pred;
  for (const auto& st : g.steps()) {
    for (const auto& topic : st.input_topics) {
      const NodeId& producer = g.producer_of(topic);
      if (g.has_step(producer)) {
        next[producer].insert(st.id);
        has_step_pred.insert(st.id);
      }
    }
  }
  std::set<std::vector<NodeId>> out;
  std::vector<NodeId> trail;
  auto walk = [&](auto&& self, const NodeId& node) -> void {
    trail.push_back(node);
    auto it = next.find(node);
    if (it == next.end() || it->second.empty()) {
      out.insert(trail);
    } else {
      for (const auto& n : it->second) {
        if (std::find(trail.begin(), trail.end(), n) == trail.end()) self(self, n);
      }
    }
    trail.pop_back();
  };
  for (const auto& st : g.steps())
    if (!has_step_pred.count(st.id)) walk(walk, st.id);
  return out;
}

/// Random valid DAG with at most `max_nodes` nodes (sources + steps).
inline FlowGraph random_graph(std::mt19937_64& rng, int max_nodes = 12) {
  std::uniform_int_distribution<int> src_count(1, 3);
  const int n_sources = src_count(rng);
  std::uniform_int_distribution<int> step_count(1, std::max(1, max_nodes - n_sources));
  const int n_steps = step_count(rng);

  std::vector<RawSource> sources;
  std::vector<std::string> topics;
  for (int k = 0; k < n_sources; ++k) {
    sources.push_back(source("src" + std::to_string(k), "raw" + std::to_string(k), "w0"));
    topics.push_back("raw" + std::to_string(k));
  }
  std::vector<StepDef> steps;
  for (int i = 0; i < n_steps; ++i) {
    std::uniform_int_distribution<int> fan(1, std::min<int>(3, static_cast<int>(topics.size())));
    const int inputs = fan(rng);
    std::vector<std::string> chosen;
    std::vector<std::string> pool = topics;
    for (int k = 0; k < inputs; ++k) {
      std::uniform_int_distribution<int> pick(0, static_cast<int>(pool.size()) - 1);
      const int at = pick(rng);
      chosen.push_back(pool[at]);
      pool.erase(pool.begin() + at);
    }
    const std::string id = "s" + std::to_string(i);
    steps.push_back(step(id, chosen, "t" + std::to_string(i)));
    topics.push_back("t" + std::to_string(i));
  }
  return build_flow_graph(sources, steps);
}

// --- random solver instances ------------------------------------------------

/// Small random instance for solver cross-checks: random graph, up to
/// `max_workers` workers, random stats, sometimes a previous placement and a
/// device-change penalty.
inline SolveRequest random_instance(std::mt19937_64& rng, int max_steps = 4,
                                    int max_workers = 3) {
  std::uniform_int_distribution<int> wcount(1, max_workers);
  std::uniform_int_distribution<int> scount(1, max_steps);
  const int n_workers = wcount(rng);
  const int n_steps = scount(rng);

  std::vector<RawSource> sources;
  std::vector<std::string> topics;
  std::uniform_int_distribution<int> src_count(1, 2);
  const int n_sources = src_count(rng);
  for (int k = 0; k < n_sources; ++k) {
    sources.push_back(
        source("src" + std::to_string(k), "raw" + std::to_string(k),
               "w" + std::to_string(k % n_workers)));
    topics.push_back("raw" + std::to_string(k));
  }
  std::vector<StepDef> steps;
  for (int i = 0; i < n_steps; ++i) {
    std::uniform_int_distribution<int> fan(1, std::min<int>(2, static_cast<int>(topics.size())));
    const int inputs = fan(rng);
    std::vector<std::string> chosen;
    std::vector<std::string> pool = topics;
    for (int k = 0; k < inputs; ++k) {
      std::uniform_int_distribution<int> pick(0, static_cast<int>(pool.size()) - 1);
      const int at = pick(rng);
      chosen.push_back(pool[at]);
      pool.erase(pool.begin() + at);
    }
    steps.push_back(step("s" + std::to_string(i), chosen, "t" + std::to_string(i)));
    topics.push_back("t" + std::to_string(i));
  }

  SolveRequest req;
  req.graph = build_flow_graph(sources, steps);
  req.paths = enumerate_paths(req.graph);

  std::uniform_int_distribution<int> cap(1, 3);
  for (int w = 0; w < n_workers; ++w)
    req.workers.push_back(worker("w" + std::to_string(w), cap(rng)));

  std::uniform_real_distribution<double> latency(0.5, 10.0);
  std::uniform_int_distribution<std::int64_t> size(1, 5000);
  for (const auto& st : req.graph.steps())
    req.stats.per_step[st.id] =
        stats(st.id, latency(rng), latency(rng), latency(rng), size(rng));
  for (const auto& src : req.graph.sources())
    req.stats.producer_bytes[src.id] = static_cast<double>(size(rng));
  for (const auto& st : req.graph.steps())
    req.stats.producer_bytes[st.id] = static_cast<double>(size(rng));

  std::uniform_real_distribution<double> pen(1.0, 2.0);
  req.params.alpha = 1.0 + 3.0 * std::generate_canonical<double, 32>(rng);
  req.params.beta = 1.0 + 3.0 * std::generate_canonical<double, 32>(rng);
  req.params.device_change_penalty = pen(rng);
  req.params.solver_time_limit_ms = 10000;
  req.seed = rng();

  if (std::uniform_int_distribution<int>(0, 1)(rng) == 1) {
    Placement prev;
    std::uniform_int_distribution<int> pick_worker(0, n_workers - 1);
    std::vector<int> left;
    for (const auto& w : req.workers) left.push_back(w.code_capacity);
    bool ok = true;
    for (const auto& st : req.graph.steps()) {
      int tries = 0;
      int w = pick_worker(rng);
      while (left[w] == 0 && tries++ < 16) w = pick_worker(rng);
      if (left[w] == 0) {
        ok = false;
        break;
      }
      --left[w];
      prev.code_loc[st.id] = req.workers[w].id;
      prev.data_loc[st.id] = req.workers[pick_worker(rng)].id;
    }
    for (const auto& src : req.graph.sources())
      prev.data_loc[src.id] = req.workers[pick_worker(rng)].id;
    if (ok) req.previous = std::move(prev);
  }
  return req;
}

/// The two-step / two-worker colocation instance: a chain where the known
/// optimum puts both steps and every datum on one worker.
inline SolveRequest two_step_instance() {
  SolveRequest req;
  req.graph = build_flow_graph({source("src", "t0", "wa")},
                               {step("sa", {"t0"}, "t1"), step("sb", {"t1"}, "t2")});
  req.paths = enumerate_paths(req.graph);
  req.workers = {worker("wa", 2), worker("wb", 2)};
  req.params.alpha = 2.0;
  req.params.beta = 2.0;
  req.params.device_change_penalty = 1.0;
  req.stats.per_step["sa"] = stats("sa", 2.0, 3.0, 1.0, 10);
  req.stats.per_step["sb"] = stats("sb", 2.0, 3.0, 1.0, 10);
  req.stats.producer_bytes = {{"src", 10.0}, {"sa", 10.0}, {"sb", 10.0}};
  req.seed = 7;
  return req;
}

}  // namespace testutil
