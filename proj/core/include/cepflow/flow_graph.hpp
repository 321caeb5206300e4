#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace cepflow {

using NodeId = std::string;
using TopicName = std::string;
using WorkerId = std::string;

/// A sensor-style application that emits raw data on a fixed period.
/// The emitting process is pinned to home_worker; only the location of
/// its stored output is assignable.
struct RawSource {
  NodeId id;
  TopicName output_topic;
  std::int64_t bytes_per_event = 1;
  double period_ms = 1.0;
  WorkerId home_worker;

  bool operator==(const RawSource&) const = default;
};

/// One processing step: consumes one datum per input topic, runs its
/// action, publishes one output datum.
///
/// Execution time model: (fixed_ms + per_byte_ms * consumed_input_bytes),
/// divided by the executing worker's cpu_factor.
/// Output datum size: output_bytes when > 0, otherwise the sum of the
/// consumed input bytes.
struct StepDef {
  NodeId id;
  std::vector<TopicName> input_topics;  // kept sorted and unique
  TopicName output_topic;
  double fixed_ms = 0.0;
  double per_byte_ms = 0.0;
  std::int64_t output_bytes = 0;  // 0 = pass-through (sum of inputs)
  std::string label;

  bool operator==(const StepDef&) const = default;
};

enum class FlowErrorCode {
  CycleDetected,
  UnboundTopic,
  DuplicateProducer,
  AmbiguousSink,
  NoSink,
  PathExplosion,
  InvalidDefinition,
};

class FlowError : public std::runtime_error {
 public:
  FlowError(FlowErrorCode code, std::string message, std::vector<NodeId> nodes = {})
      : std::runtime_error(std::move(message)), code_(code), nodes_(std::move(nodes)) {}

  FlowErrorCode code() const { return code_; }
  /// Offending nodes (for CycleDetected: the cycle sequence, first repeated last).
  const std::vector<NodeId>& nodes() const { return nodes_; }

 private:
  FlowErrorCode code_;
  std::vector<NodeId> nodes_;
};

/// A simple path through the step DAG, from a source-adjacent step (one
/// with no step predecessors) to a sink step (one with no step consumers).
/// Paths list steps only; the raw sources feeding the first step are kept
/// alongside because end-to-end delay is measured from raw-data production.
struct FlowPath {
  std::vector<NodeId> steps;
  std::vector<NodeId> feeding_sources;

  bool operator==(const FlowPath&) const = default;
};

/// Immutable DAG over raw sources and steps, edges derived from topic
/// publish/subscribe matching. Construct via build_flow_graph; safe to
/// share across threads afterwards.
class FlowGraph {
 public:
  const std::vector<RawSource>& sources() const { return sources_; }
  const std::vector<StepDef>& steps() const { return steps_; }

  bool has_step(const NodeId& id) const { return step_index_.count(id) != 0; }
  bool is_source(const NodeId& id) const { return source_index_.count(id) != 0; }
  const StepDef& step(const NodeId& id) const { return steps_[step_index_.at(id)]; }
  const RawSource& source(const NodeId& id) const { return sources_[source_index_.at(id)]; }

  /// Producer node (source or step) of a topic.
  const NodeId& producer_of(const TopicName& topic) const { return producer_of_.at(topic); }

  /// Step ids consuming the given producer's output topic, sorted by id.
  const std::vector<NodeId>& consumers_of(const NodeId& producer) const;

  /// Producer node of each input topic of a step, in input-topic order.
  const std::vector<NodeId>& input_producers(const NodeId& step) const {
    return input_producers_.at(step);
  }

  /// Steps with no step predecessors (all inputs come from raw sources).
  const std::vector<NodeId>& start_steps() const { return start_steps_; }
  /// Steps whose output no other step consumes.
  const std::vector<NodeId>& sink_steps() const { return sink_steps_; }
  /// Steps in a topological order (stable across runs).
  const std::vector<NodeId>& topo_order() const { return topo_order_; }

  friend FlowGraph build_flow_graph(std::vector<RawSource> sources, std::vector<StepDef> steps);

 private:
  std::vector<RawSource> sources_;  // sorted by id
  std::vector<StepDef> steps_;      // sorted by id
  std::map<NodeId, std::size_t> source_index_;
  std::map<NodeId, std::size_t> step_index_;
  std::map<TopicName, NodeId> producer_of_;
  std::map<NodeId, std::vector<NodeId>> consumers_;        // producer -> consuming steps
  std::map<NodeId, std::vector<NodeId>> input_producers_;  // step -> producers per input
  std::vector<NodeId> start_steps_;
  std::vector<NodeId> sink_steps_;
  std::vector<NodeId> topo_order_;
};

/// Validates definitions, resolves topics and returns the DAG.
/// Throws FlowError: CycleDetected (with the cycle), UnboundTopic,
/// DuplicateProducer, InvalidDefinition.
FlowGraph build_flow_graph(std::vector<RawSource> sources, std::vector<StepDef> steps);

inline constexpr std::size_t kDefaultPathCap = 10000;

/// Depth-first enumeration of every simple path from each source-adjacent
/// step to each sink step, in lexicographic order of their step-id
/// sequences. Throws FlowError{PathExplosion} past path_cap.
std::vector<FlowPath> enumerate_paths(const FlowGraph& graph,
                                      std::size_t path_cap = kDefaultPathCap);

/// The unique sink step, where all paths end ("last event").
/// Throws FlowError{AmbiguousSink} when several sinks exist, NoSink when none.
const StepDef& last_step(const FlowGraph& graph);

}  // namespace cepflow
