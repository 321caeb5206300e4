#include "cepflow/flow_graph.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace cepflow {

namespace {

std::string join_ids(const std::vector<NodeId>& ids, const char* sep = " -> ") {
  std::ostringstream out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) out << sep;
    out << ids[i];
  }
  return out.str();
}

void validate_definitions(const std::vector<RawSource>& sources,
                          const std::vector<StepDef>& steps) {
  for (const auto& s : sources) {
    if (s.id.empty() || s.output_topic.empty())
      throw FlowError(FlowErrorCode::InvalidDefinition,
                      "raw source with empty id or topic");
    if (s.bytes_per_event < 1)
      throw FlowError(FlowErrorCode::InvalidDefinition,
                      "raw source '" + s.id + "': bytes_per_event must be >= 1");
    if (s.period_ms <= 0)
      throw FlowError(FlowErrorCode::InvalidDefinition,
                      "raw source '" + s.id + "': period_ms must be > 0");
  }
  for (const auto& st : steps) {
    if (st.id.empty() || st.output_topic.empty())
      throw FlowError(FlowErrorCode::InvalidDefinition,
                      "step with empty id or output topic");
    if (st.input_topics.empty())
      throw FlowError(FlowErrorCode::InvalidDefinition,
                      "step '" + st.id + "': needs at least one input topic");
    for (const auto& t : st.input_topics) {
      if (t == st.output_topic)
        throw FlowError(FlowErrorCode::InvalidDefinition,
                        "step '" + st.id + "': output topic also listed as input");
    }
    if (st.fixed_ms < 0 || st.per_byte_ms < 0 || st.output_bytes < 0)
      throw FlowError(FlowErrorCode::InvalidDefinition,
                      "step '" + st.id + "': negative cost or size profile");
  }
}

}  // namespace

const std::vector<NodeId>& FlowGraph::consumers_of(const NodeId& producer) const {
  static const std::vector<NodeId> kEmpty;
  auto it = consumers_.find(producer);
  return it == consumers_.end() ? kEmpty : it->second;
}

FlowGraph build_flow_graph(std::vector<RawSource> sources, std::vector<StepDef> steps) {
  validate_definitions(sources, steps);

  FlowGraph g;
  std::sort(sources.begin(), sources.end(),
            [](const RawSource& a, const RawSource& b) { return a.id < b.id; });
  std::sort(steps.begin(), steps.end(),
            [](const StepDef& a, const StepDef& b) { return a.id < b.id; });
  for (auto& st : steps) {
    std::sort(st.input_topics.begin(), st.input_topics.end());
    st.input_topics.erase(std::unique(st.input_topics.begin(), st.input_topics.end()),
                          st.input_topics.end());
  }
  g.sources_ = std::move(sources);
  g.steps_ = std::move(steps);

  for (std::size_t i = 0; i < g.sources_.size(); ++i) {
    if (!g.source_index_.emplace(g.sources_[i].id, i).second)
      throw FlowError(FlowErrorCode::InvalidDefinition,
                      "duplicate node id '" + g.sources_[i].id + "'");
  }
  for (std::size_t i = 0; i < g.steps_.size(); ++i) {
    if (g.source_index_.count(g.steps_[i].id) ||
        !g.step_index_.emplace(g.steps_[i].id, i).second)
      throw FlowError(FlowErrorCode::InvalidDefinition,
                      "duplicate node id '" + g.steps_[i].id + "'");
  }

  auto claim_topic = [&](const TopicName& topic, const NodeId& node) {
    auto [it, inserted] = g.producer_of_.emplace(topic, node);
    if (!inserted)
      throw FlowError(FlowErrorCode::DuplicateProducer,
                      "topic '" + topic + "' published by both '" + it->second +
                          "' and '" + node + "'",
                      {it->second, node});
  };
  for (const auto& s : g.sources_) claim_topic(s.output_topic, s.id);
  for (const auto& st : g.steps_) claim_topic(st.output_topic, st.id);

  for (const auto& st : g.steps_) {
    std::vector<NodeId> producers;
    producers.reserve(st.input_topics.size());
    for (const auto& topic : st.input_topics) {
      auto it = g.producer_of_.find(topic);
      if (it == g.producer_of_.end())
        throw FlowError(FlowErrorCode::UnboundTopic,
                        "step '" + st.id + "' subscribes to topic '" + topic +
                            "' that nothing publishes",
                        {st.id});
      producers.push_back(it->second);
      g.consumers_[it->second].push_back(st.id);
    }
    g.input_producers_.emplace(st.id, std::move(producers));
  }
  for (auto& [prod, cons] : g.consumers_) {
    std::sort(cons.begin(), cons.end());
    cons.erase(std::unique(cons.begin(), cons.end()), cons.end());
  }

  // Cycle check over the step-induced subgraph, DFS with three colors.
  enum class Color { White, Gray, Black };
  std::map<NodeId, Color> color;
  for (const auto& st : g.steps_) color[st.id] = Color::White;
  std::vector<NodeId> stack;
  std::function<void(const NodeId&)> visit = [&](const NodeId& id) {
    color[id] = Color::Gray;
    stack.push_back(id);
    for (const auto& next : g.consumers_of(id)) {
      if (color[next] == Color::Gray) {
        auto begin = std::find(stack.begin(), stack.end(), next);
        std::vector<NodeId> cycle(begin, stack.end());
        cycle.push_back(next);
        throw FlowError(FlowErrorCode::CycleDetected,
                        "cyclic step relationship: " + join_ids(cycle), cycle);
      }
      if (color[next] == Color::White) visit(next);
    }
    stack.pop_back();
    color[id] = Color::Black;
    g.topo_order_.push_back(id);
  };
  for (const auto& st : g.steps_)
    if (color[st.id] == Color::White) visit(st.id);
  std::reverse(g.topo_order_.begin(), g.topo_order_.end());

  for (const auto& st : g.steps_) {
    bool has_step_pred = false;
    for (const auto& p : g.input_producers_.at(st.id))
      has_step_pred = has_step_pred || g.has_step(p);
    if (!has_step_pred) g.start_steps_.push_back(st.id);
    if (g.consumers_of(st.id).empty()) g.sink_steps_.push_back(st.id);
  }

  return g;
}

std::vector<FlowPath> enumerate_paths(const FlowGraph& graph, std::size_t path_cap) {
  std::vector<FlowPath> paths;
  std::vector<NodeId> current;

  std::function<void(const NodeId&)> walk = [&](const NodeId& node) {
    current.push_back(node);
    const auto& next = graph.consumers_of(node);
    if (next.empty()) {
      if (paths.size() >= path_cap)
        throw FlowError(FlowErrorCode::PathExplosion,
                        "more than " + std::to_string(path_cap) + " simple paths");
      FlowPath p;
      p.steps = current;
      for (const auto& prod : graph.input_producers(current.front()))
        if (graph.is_source(prod)) p.feeding_sources.push_back(prod);
      std::sort(p.feeding_sources.begin(), p.feeding_sources.end());
      p.feeding_sources.erase(
          std::unique(p.feeding_sources.begin(), p.feeding_sources.end()),
          p.feeding_sources.end());
      paths.push_back(std::move(p));
    } else {
      for (const auto& n : next) walk(n);  // consumers_of is sorted, DFS emits lexicographic order
    }
    current.pop_back();
  };

  for (const auto& start : graph.start_steps()) walk(start);
  return paths;
}

const StepDef& last_step(const FlowGraph& graph) {
  const auto& sinks = graph.sink_steps();
  if (sinks.empty())
    throw FlowError(FlowErrorCode::NoSink, "flow has no sink step");
  if (sinks.size() > 1)
    throw FlowError(FlowErrorCode::AmbiguousSink,
                    "flow has " + std::to_string(sinks.size()) +
                        " sink steps (" + join_ids(sinks, ", ") + "), expected one",
                    sinks);
  return graph.step(sinks.front());
}

}  // namespace cepflow
