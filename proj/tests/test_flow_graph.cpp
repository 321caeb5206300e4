#include <doctest.h>

#include <random>

#include "cepflow/scenario.hpp"
#include "helpers.hpp"

using namespace cepflow;
using namespace testutil;

TEST_CASE("linear chain builds with expected shape") {
  const FlowGraph g = chain_graph(2);
  CHECK(g.sources().size() == 1);
  CHECK(g.steps().size() == 2);
  // 3 nodes, 2 edges: src->s1, s1->s2
  CHECK(g.consumers_of("src") == std::vector<NodeId>{"s1"});
  CHECK(g.consumers_of("s1") == std::vector<NodeId>{"s2"});
  CHECK(g.consumers_of("s2").empty());
  CHECK(g.start_steps() == std::vector<NodeId>{"s1"});
  CHECK(g.sink_steps() == std::vector<NodeId>{"s2"});
}

TEST_CASE("two-step cycle is rejected with the offending sequence") {
  std::vector<RawSource> sources = {source("src", "raw", "w0")};
  std::vector<StepDef> steps = {
      step("a", {"raw", "tb"}, "ta"),
      step("b", {"ta"}, "tb"),
  };
  try {
    build_flow_graph(sources, steps);
    FAIL("expected CycleDetected");
  } catch (const FlowError& e) {
    CHECK(e.code() == FlowErrorCode::CycleDetected);
    REQUIRE(e.nodes().size() == 3);  // a -> b -> a
    CHECK(e.nodes().front() == e.nodes().back());
  }
}

TEST_CASE("unbound topic and duplicate producer are rejected") {
  CHECK_THROWS_WITH_AS(
      build_flow_graph({source("src", "raw", "w0")}, {step("a", {"nope"}, "ta")}),
      doctest::Contains("nope"), FlowError);

  try {
    build_flow_graph({source("src", "raw", "w0")},
                     {step("a", {"raw"}, "dup"), step("b", {"raw"}, "dup")});
    FAIL("expected DuplicateProducer");
  } catch (const FlowError& e) {
    CHECK(e.code() == FlowErrorCode::DuplicateProducer);
  }
}

TEST_CASE("invalid definitions are rejected") {
  CHECK_THROWS_AS(build_flow_graph({source("src", "raw", "w0")}, {step("a", {}, "ta")}),
                  FlowError);
  CHECK_THROWS_AS(build_flow_graph({source("src", "raw", "w0")},
                                   {step("a", {"raw", "ta"}, "ta")}),
                  FlowError);
  auto bad = source("src", "raw", "w0");
  bad.period_ms = 0.0;
  CHECK_THROWS_AS(build_flow_graph({bad}, {step("a", {"raw"}, "ta")}), FlowError);
}

TEST_CASE("chain of three steps has exactly one path of length three") {
  const auto paths = enumerate_paths(chain_graph(3));
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].steps == std::vector<NodeId>{"s1", "s2", "s3"});
  CHECK(paths[0].feeding_sources == std::vector<NodeId>{"src"});
}

TEST_CASE("diamond has exactly two paths") {
  const auto paths = enumerate_paths(diamond_graph());
  REQUIRE(paths.size() == 2);
  CHECK(paths[0].steps == std::vector<NodeId>{"a", "b", "d"});
  CHECK(paths[1].steps == std::vector<NodeId>{"a", "c", "d"});
}

TEST_CASE("3x3x3 layered fully-connected graph matches the oracle count") {
  const FlowGraph g = layered_graph(3, 3);
  const auto oracle = oracle_paths(g);
  const auto paths = enumerate_paths(g);
  CHECK(oracle.size() == 27);  // 3 starts x 3 middle x 3 sinks
  CHECK(paths.size() == oracle.size());
}

TEST_CASE("path cap raises PathExplosion") {
  const FlowGraph g = layered_graph(3, 3);
  CHECK_THROWS_AS(enumerate_paths(g, 10), FlowError);
  try {
    enumerate_paths(g, 10);
  } catch (const FlowError& e) {
    CHECK(e.code() == FlowErrorCode::PathExplosion);
  }
}

TEST_CASE("last_step returns the unique sink") {
  CHECK(last_step(chain_graph(3)).id == "s3");
  CHECK(last_step(diamond_graph()).id == "d");

  // two disconnected sinks
  const FlowGraph g = build_flow_graph(
      {source("src", "raw", "w0")},
      {step("a", {"raw"}, "ta"), step("b", {"raw"}, "tb")});
  try {
    last_step(g);
    FAIL("expected AmbiguousSink");
  } catch (const FlowError& e) {
    CHECK(e.code() == FlowErrorCode::AmbiguousSink);
    CHECK(e.nodes() == std::vector<NodeId>{"a", "b"});
  }
}

TEST_CASE("vehicle fixture path count matches the recursive oracle") {
  const ScenarioConfig cfg =
      load_scenario_file(std::string(CEPFLOW_REPO_DIR) + "/scenarios/vehicle.json");
  const FlowGraph g = build_flow_graph(cfg.sources, cfg.steps);
  const auto oracle = oracle_paths(g);
  const auto paths = enumerate_paths(g);
  CHECK(paths.size() == oracle.size());
  CHECK(oracle.size() == 8);  // documented fixture path count
  CHECK(last_step(g).id == "park_decision");
}

TEST_CASE("enumerate_paths equals the recursive oracle on random DAGs") {
  std::mt19937_64 rng(20240817);
  for (int round = 0; round < 500; ++round) {
    const FlowGraph g = random_graph(rng, 12);
    const auto oracle = oracle_paths(g);
    const auto paths = enumerate_paths(g);
    REQUIRE(paths.size() == oracle.size());
    std::set<std::vector<NodeId>> mine;
    for (const auto& p : paths) {
      // each returned sequence is a valid simple path
      for (std::size_t i = 0; i + 1 < p.steps.size(); ++i) {
        const auto& next = g.consumers_of(p.steps[i]);
        REQUIRE(std::find(next.begin(), next.end(), p.steps[i + 1]) != next.end());
      }
      std::set<NodeId> uniq(p.steps.begin(), p.steps.end());
      REQUIRE(uniq.size() == p.steps.size());
      mine.insert(p.steps);
    }
    REQUIRE(mine == oracle);
  }
}

TEST_CASE("path enumeration is deterministic") {
  std::mt19937_64 rng(99);
  const FlowGraph g = random_graph(rng, 12);
  CHECK(enumerate_paths(g) == enumerate_paths(g));
}

TEST_CASE("topological order is consistent with the edges") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 50; ++round) {
    const FlowGraph g = random_graph(rng, 12);
    const auto order = g.topo_order();
    std::map<NodeId, std::size_t> pos;
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    for (const auto& st : g.steps())
      for (const auto& consumer : g.consumers_of(st.id))
        REQUIRE(pos.at(st.id) < pos.at(consumer));
  }
}
