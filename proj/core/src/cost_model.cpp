#include "cepflow/cost_model.hpp"

#include <algorithm>

namespace cepflow {

double step_latency(const StepStats& stats, const StepDef& step, const Placement& placement,
                    const CostParams& params, const FlowGraph& graph) {
  const WorkerId& worker = placement.code_loc.at(step.id);
  double read = 0.0;
  for (const NodeId& producer : graph.input_producers(step.id)) {
    const bool remote = placement.data_loc.at(producer) != worker;
    read += stats.read_ms * (remote ? params.alpha : 1.0);
  }
  const bool write_remote = placement.data_loc.at(step.id) != worker;
  const double write = stats.write_ms * (write_remote ? params.beta : 1.0);
  return read + stats.execute_ms + write;
}

namespace {

const StepStats& stats_for(const StatsWindow& window, const NodeId& step_id) {
  auto it = window.per_step.find(step_id);
  if (it == window.per_step.end())
    throw CostError(CostError::Code::MissingStats, step_id,
                    "no statistics for step '" + step_id + "'");
  return it->second;
}

}  // namespace

double path_latency(const FlowPath& path, const StatsWindow& window,
                    const Placement& placement, const CostParams& params,
                    const FlowGraph& graph) {
  double total = 0.0;
  for (const NodeId& id : path.steps)
    total += step_latency(stats_for(window, id), graph.step(id), placement, params, graph);
  return total;
}

double step_cost(const StepStats& stats, const StepDef& step, const Placement& placement,
                 const CostParams& params, const FlowGraph& graph) {
  const auto bytes = std::max<std::int64_t>(1, stats.bytes);
  return step_latency(stats, step, placement, params, graph) / static_cast<double>(bytes);
}

double path_cost(const FlowPath& path, const StatsWindow& window, const Placement& placement,
                 const CostParams& params, const FlowGraph& graph) {
  double total = 0.0;
  for (const NodeId& id : path.steps)
    total += step_cost(stats_for(window, id), graph.step(id), placement, params, graph);
  return total;
}

std::pair<FlowPath, double> critical_path(const std::vector<FlowPath>& paths,
                                          const StatsWindow& window, const Placement& placement,
                                          const CostParams& params, const FlowGraph& graph) {
  const FlowPath* best = nullptr;
  double best_cost = 0.0;
  for (const FlowPath& p : paths) {
    const double c = path_cost(p, window, placement, params, graph);
    if (!best || c > best_cost || (c == best_cost && p.steps < best->steps)) {
      best = &p;
      best_cost = c;
    }
  }
  if (!best)
    throw FlowError(FlowErrorCode::NoSink, "flow has no paths");
  return {*best, best_cost};
}

std::pair<FlowPath, double> critical_path(const FlowGraph& graph, const StatsWindow& window,
                                          const Placement& placement, const CostParams& params) {
  return critical_path(enumerate_paths(graph), window, placement, params, graph);
}

double activation_cost(const StepDef&, const WorkerProfile& worker) {
  return worker.download_ms + worker.subscribe_ms;
}

}  // namespace cepflow
