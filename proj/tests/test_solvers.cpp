#include <doctest.h>

#include <random>

#include "helpers.hpp"

using namespace cepflow;
using namespace testutil;

namespace {

SolveRequest one_step_two_workers() {
  SolveRequest req;
  req.graph = build_flow_graph({source("src", "t0", "wa")}, {step("s", {"t0"}, "t1")});
  req.paths = enumerate_paths(req.graph);
  req.workers = {worker("wa", 2), worker("wb", 2)};
  req.params.alpha = 2.0;
  req.params.beta = 2.0;
  req.stats.per_step["s"] = stats("s", 2.0, 3.0, 1.0, 10);
  return req;
}

/// Source feeding two sink steps; previous placement splits them so that
/// joining is profitable without a penalty but not with penalty 2.
SolveRequest split_consumers_instance(double penalty) {
  SolveRequest req;
  req.graph = build_flow_graph({source("src", "t0", "w1")},
                               {step("sa", {"t0"}, "ta"), step("sb", {"t0"}, "tb")});
  req.paths = enumerate_paths(req.graph);
  req.workers = {worker("w1", 2), worker("w2", 2)};
  req.params.alpha = 3.0;
  req.params.beta = 3.0;
  req.params.device_change_penalty = penalty;
  req.stats.per_step["sa"] = stats("sa", 1.0, 1.0, 1.0, 1);
  req.stats.per_step["sb"] = stats("sb", 1.0, 1.0, 0.5, 1);
  Placement prev;
  prev.code_loc = {{"sa", "w1"}, {"sb", "w2"}};
  prev.data_loc = {{"src", "w1"}, {"sa", "w1"}, {"sb", "w2"}};
  req.previous = prev;
  return req;
}

}  // namespace

TEST_CASE("exact: one step, two identical workers, ties to the lowest id") {
  const SolveRequest req = one_step_two_workers();
  const SolveResult res = solve_exact(req);
  CHECK(res.status == SolveStatus::Optimal);
  CHECK(res.placement.code_loc.at("s") == "wa");
  CHECK(res.placement.data_loc.at("s") == "wa");
  CHECK(res.placement.data_loc.at("src") == "wa");
  CHECK(res.objective == doctest::Approx(0.6));  // (2+3+1)/10 all local
}

TEST_CASE("exact: symmetric two-step chain colocates everything, matches the oracle") {
  const SolveRequest req = two_step_instance();
  const SolveResult res = solve_exact(req);
  const SolveResult oracle = brute_force_oracle(req);
  REQUIRE(res.status == SolveStatus::Optimal);
  REQUIRE(oracle.status == SolveStatus::Optimal);
  CHECK(res.objective == doctest::Approx(oracle.objective).epsilon(1e-12));
  CHECK(res.objective == doctest::Approx(1.2));  // two all-local steps, (6/10) each

  const WorkerId home = res.placement.code_loc.at("sa");
  CHECK(res.placement.code_loc.at("sb") == home);
  CHECK(res.placement.data_loc.at("sa") == home);
  CHECK(res.placement.data_loc.at("sb") == home);
  CHECK(res.placement.data_loc.at("src") == home);
}

TEST_CASE("exact: device-change penalty keeps the previous worker") {
  // Without a penalty, pulling sb next to the shared datum wins.
  const SolveResult free_move = solve_exact(split_consumers_instance(1.0));
  CHECK(free_move.placement.code_loc.at("sb") == "w1");
  CHECK(free_move.objective == doctest::Approx(3.0));

  // With penalty 2.0 the 1.8x improvement is no longer worth it.
  const SolveRequest sticky = split_consumers_instance(2.0);
  const SolveResult res = solve_exact(sticky);
  CHECK(res.placement.code_loc.at("sb") == "w2");
  CHECK(res.objective == doctest::Approx(4.5));  // sb keeps its remote read
  const SolveResult oracle = brute_force_oracle(sticky);
  CHECK(res.objective == doctest::Approx(oracle.objective).epsilon(1e-12));
}

TEST_CASE("oracle: single step and single worker") {
  SolveRequest req;
  req.graph = build_flow_graph({source("src", "t0", "w0")}, {step("s", {"t0"}, "t1")});
  req.paths = enumerate_paths(req.graph);
  req.workers = {worker("w0", 1)};
  req.stats.per_step["s"] = stats("s", 1.0, 1.0, 1.0, 1);
  const SolveResult res = brute_force_oracle(req);
  CHECK(res.status == SolveStatus::Optimal);
  CHECK(res.placement.code_loc.at("s") == "w0");
}

TEST_CASE("oracle: infeasible capacities and the instance guard") {
  SolveRequest req = two_step_instance();
  req.workers = {worker("wa", 1)};  // 2 steps, capacity 1
  CHECK(brute_force_oracle(req).status == SolveStatus::Infeasible);
  CHECK(solve_exact(req).status == SolveStatus::Infeasible);

  SolveRequest big = two_step_instance();
  for (int w = 0; w < 12; ++w) big.workers.push_back(worker("wx" + std::to_string(w), 4));
  std::vector<StepDef> many;
  std::vector<std::string> prev = {"t0"};
  for (int i = 0; i < 12; ++i) {
    many.push_back(step("m" + std::to_string(i), prev, "tm" + std::to_string(i)));
    prev = {"tm" + std::to_string(i)};
  }
  big.graph = build_flow_graph({source("src", "t0", "wa")}, many);
  big.paths = enumerate_paths(big.graph);
  big.stats.per_step.clear();
  for (const auto& st : big.graph.steps())
    big.stats.per_step[st.id] = stats(st.id, 1, 1, 1, 1);
  CHECK_THROWS_AS(brute_force_oracle(big), SolverError);
}

TEST_CASE("exact equals oracle on random instances") {
  std::mt19937_64 rng(314159);
  int solved = 0;
  for (int round = 0; round < 120; ++round) {
    const SolveRequest req = random_instance(rng);
    const SolveResult oracle = brute_force_oracle(req);
    const SolveResult res = solve_exact(req);
    REQUIRE(res.status == oracle.status);
    if (res.status == SolveStatus::Optimal) {
      ++solved;
      REQUIRE(res.objective == doctest::Approx(oracle.objective).epsilon(1e-9));
    }
  }
  CHECK(solved > 60);  // most random instances are feasible
}

TEST_CASE("exact: relabeling identical workers leaves the objective unchanged") {
  std::mt19937_64 rng(2718);
  for (int round = 0; round < 20; ++round) {
    SolveRequest req = random_instance(rng);
    for (auto& w : req.workers) w.code_capacity = 3;  // force identical profiles
    const double base = solve_exact(req).objective;

    SolveRequest relabeled = req;
    std::map<WorkerId, WorkerId> rename;
    for (std::size_t i = 0; i < req.workers.size(); ++i)
      rename[req.workers[i].id] = req.workers[(i + 1) % req.workers.size()].id;
    if (relabeled.previous) {
      for (auto& [id, w] : relabeled.previous->code_loc) w = rename.at(w);
      for (auto& [id, w] : relabeled.previous->data_loc) w = rename.at(w);
    }
    if (solve_exact(relabeled).status == SolveStatus::Optimal)
      CHECK(solve_exact(relabeled).objective == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("exact: with penalty 1 and no previous, the previous field is irrelevant") {
  std::mt19937_64 rng(987);
  for (int round = 0; round < 20; ++round) {
    SolveRequest req = random_instance(rng);
    req.params.device_change_penalty = 1.0;
    SolveRequest stripped = req;
    stripped.previous.reset();
    const SolveResult a = solve_exact(req);
    const SolveResult b = solve_exact(stripped);
    REQUIRE(a.status == b.status);
    if (a.status == SolveStatus::Optimal)
      CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-9));
  }
}

TEST_CASE("exact is deterministic under a tight budget") {
  std::mt19937_64 rng(5555);
  SolveRequest req = random_instance(rng, 4, 3);
  req.params.solver_time_limit_ms = 1;  // forces the work-unit cutoff
  const SolveResult a = solve_exact(req);
  const SolveResult b = solve_exact(req);
  CHECK(a.status == b.status);
  CHECK(a.placement == b.placement);
  CHECK(a.objective == b.objective);
  CHECK(a.work_ms == b.work_ms);
}

TEST_CASE("crrb deals steps cyclically and colocates their data") {
  SolveRequest req;
  req.graph = build_flow_graph(
      {source("src", "t0", "w2")},
      {step("s1", {"t0"}, "t1"), step("s2", {"t0"}, "t2"), step("s3", {"t0"}, "t3"),
       step("s4", {"t0"}, "t4")});
  req.paths = enumerate_paths(req.graph);
  req.workers = {worker("w1", 2), worker("w2", 2)};
  for (const auto& st : req.graph.steps())
    req.stats.per_step[st.id] = stats(st.id, 1, 1, 1, 1);

  const SolveResult res = solve_crrb(req);
  REQUIRE(res.status == SolveStatus::Optimal);
  CHECK(res.placement.code_loc.at("s1") == "w1");
  CHECK(res.placement.code_loc.at("s2") == "w2");
  CHECK(res.placement.code_loc.at("s3") == "w1");
  CHECK(res.placement.code_loc.at("s4") == "w2");
  for (const auto& st : req.graph.steps())
    CHECK(res.placement.data_loc.at(st.id) == res.placement.code_loc.at(st.id));
  CHECK(res.placement.data_loc.at("src") == "w2");  // home worker

  SUBCASE("single step lands on the first worker") {
    SolveRequest one;
    one.graph = build_flow_graph({source("src", "t0", "w2")}, {step("s", {"t0"}, "t1")});
    one.paths = enumerate_paths(one.graph);
    one.workers = req.workers;
    one.stats.per_step["s"] = stats("s", 1, 1, 1, 1);
    CHECK(solve_crrb(one).placement.code_loc.at("s") == "w1");
  }

  SUBCASE("cyclic dealing that violates capacity is infeasible") {
    std::vector<StepDef> five;
    for (int i = 1; i <= 5; ++i)
      five.push_back(step("s" + std::to_string(i), {"t0"}, "u" + std::to_string(i)));
    SolveRequest tight;
    tight.graph = build_flow_graph({source("src", "t0", "w2")}, five);
    tight.paths = enumerate_paths(tight.graph);
    tight.workers = {worker("w1", 2), worker("w2", 2)};
    for (const auto& st : tight.graph.steps())
      tight.stats.per_step[st.id] = stats(st.id, 1, 1, 1, 1);
    CHECK(solve_crrb(tight).status == SolveStatus::Infeasible);
  }
}

TEST_CASE("random placement is seeded, balanced, and uniform across seeds") {
  SolveRequest req;
  std::vector<StepDef> six;
  for (int i = 0; i < 6; ++i)
    six.push_back(step("s" + std::to_string(i), {"t0"}, "u" + std::to_string(i)));
  req.graph = build_flow_graph({source("src", "t0", "w0")}, six);
  req.paths = enumerate_paths(req.graph);
  req.workers = {worker("w0", 4), worker("w1", 4), worker("w2", 4)};
  for (const auto& st : req.graph.steps())
    req.stats.per_step[st.id] = stats(st.id, 1, 1, 1, 1);

  req.seed = 123;
  const SolveResult once = solve_random(req);
  CHECK(once.placement == solve_random(req).placement);

  std::map<WorkerId, int> count;
  for (const auto& [id, w] : once.placement.code_loc) ++count[w];
  for (const auto& [w, n] : count) CHECK(n == 2);

  std::map<WorkerId, int> s0_freq;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    req.seed = seed;
    ++s0_freq[solve_random(req).placement.code_loc.at("s0")];
  }
  for (const auto& w : req.workers) {
    const double freq = s0_freq[w.id] / 10000.0;
    CHECK(freq == doctest::Approx(1.0 / 3.0).epsilon(0.06));  // 1/3 +- 0.02
  }
}

TEST_CASE("local greedy follows the stored bytes") {
  SolveRequest req;
  req.graph = build_flow_graph(
      {source("big", "tb", "w1"), source("small", "ts", "w2")},
      {step("s", {"tb", "ts"}, "out")});
  req.paths = enumerate_paths(req.graph);
  req.workers = {worker("w1", 2), worker("w2", 2)};
  req.stats.per_step["s"] = stats("s", 1, 1, 1, 110);
  req.stats.producer_bytes = {{"big", 100.0}, {"small", 10.0}, {"s", 50.0}};

  const SolveResult res = solve_local(req);
  REQUIRE(res.status == SolveStatus::Optimal);
  CHECK(res.placement.code_loc.at("s") == "w1");
  CHECK(res.placement.data_loc.at("big") == "w1");
  CHECK(res.placement.data_loc.at("small") == "w1");  // pulled along

  SUBCASE("full worker falls back to the next-best") {
    // Two filler steps claim w1's two slots first (larger input bytes).
    SolveRequest crowded;
    crowded.graph = build_flow_graph(
        {source("big", "tb", "w1"), source("small", "ts", "w2"),
         source("huge1", "th1", "w1"), source("huge2", "th2", "w1")},
        {step("s", {"tb", "ts"}, "out"), step("f1", {"th1"}, "o1"),
         step("f2", {"th2"}, "o2")});
    crowded.paths = enumerate_paths(crowded.graph);
    crowded.workers = {worker("w1", 2), worker("w2", 2)};
    for (const auto& st : crowded.graph.steps())
      crowded.stats.per_step[st.id] = stats(st.id, 1, 1, 1, 1);
    crowded.stats.producer_bytes = {{"big", 100.0}, {"small", 10.0},
                                    {"huge1", 500.0}, {"huge2", 400.0},
                                    {"s", 1.0},      {"f1", 1.0},
                                    {"f2", 1.0}};
    const SolveResult r = solve_local(crowded);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.placement.code_loc.at("f1") == "w1");
    CHECK(r.placement.code_loc.at("f2") == "w1");
    CHECK(r.placement.code_loc.at("s") == "w2");  // w1 is full
  }

  SUBCASE("infeasible when two slots per worker cannot host the steps") {
    SolveRequest tight;
    std::vector<StepDef> five;
    for (int i = 0; i < 5; ++i)
      five.push_back(step("s" + std::to_string(i), {"tb"}, "u" + std::to_string(i)));
    tight.graph = build_flow_graph({source("big", "tb", "w1")}, five);
    tight.paths = enumerate_paths(tight.graph);
    tight.workers = {worker("w1", 9), worker("w2", 9)};  // LOCAL caps at 2 regardless
    for (const auto& st : tight.graph.steps())
      tight.stats.per_step[st.id] = stats(st.id, 1, 1, 1, 1);
    CHECK(solve_local(tight).status == SolveStatus::Infeasible);
  }
}

TEST_CASE("local placement flips when producer sizes oscillate across windows") {
  // Anchor steps ka/kb outrank j (their stable inputs d/e dominate) and pin
  // a's data to w1 and b's data to w2 every window; the joint consumer j
  // then chases whichever of a/b currently carries more bytes.
  SolveRequest req;
  req.graph = build_flow_graph(
      {source("a", "ta", "w1"), source("b", "tb", "w2"), source("d", "td", "w1"),
       source("e", "te", "w2")},
      {step("j", {"ta", "tb"}, "out_j"), step("ka", {"ta", "td"}, "out_ka"),
       step("kb", {"tb", "te"}, "out_kb")});
  req.paths = enumerate_paths(req.graph);
  req.workers = {worker("w1", 2), worker("w2", 2)};
  for (const auto& st : req.graph.steps())
    req.stats.per_step[st.id] = stats(st.id, 1, 1, 1, 1);

  req.stats.producer_bytes = {{"a", 900.0}, {"b", 100.0},   {"d", 10000.0},
                              {"e", 10000.0}, {"j", 1.0},   {"ka", 1.0},
                              {"kb", 1.0}};
  const SolveResult first = solve_local(req);
  REQUIRE(first.status == SolveStatus::Optimal);
  CHECK(first.placement.code_loc.at("ka") == "w1");
  CHECK(first.placement.code_loc.at("kb") == "w2");
  CHECK(first.placement.code_loc.at("j") == "w1");  // a's 900 bytes sit on w1

  req.previous = first.placement;
  req.stats.producer_bytes["a"] = 100.0;
  req.stats.producer_bytes["b"] = 900.0;
  const SolveResult second = solve_local(req);
  REQUIRE(second.status == SolveStatus::Optimal);
  CHECK(second.placement.code_loc.at("j") == "w2");  // b's 900 bytes sit on w2
}

TEST_CASE("ga: trivial instance, elitism monotonicity, determinism") {
  SolveRequest req;
  req.graph = build_flow_graph({source("src", "t0", "w0")}, {step("s", {"t0"}, "t1")});
  req.paths = enumerate_paths(req.graph);
  req.workers = {worker("w0", 1)};
  req.stats.per_step["s"] = stats("s", 1, 1, 1, 1);
  req.seed = 9;

  const SolveResult res = solve_ga(req);
  REQUIRE(res.status == SolveStatus::Optimal);
  CHECK(res.placement.code_loc.at("s") == "w0");

  const SolveRequest two = two_step_instance();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SolveRequest r = two;
    r.seed = seed;
    const GaDiagnostics diag = solve_ga_detailed(r);
    REQUIRE(diag.best_fitness_per_generation.size() == 20);
    for (std::size_t g = 1; g < diag.best_fitness_per_generation.size(); ++g)
      REQUIRE(diag.best_fitness_per_generation[g] >=
              diag.best_fitness_per_generation[g - 1]);
  }

  SolveRequest r1 = two, r2 = two;
  r1.seed = r2.seed = 77;
  CHECK(solve_ga(r1).placement == solve_ga(r2).placement);
}

TEST_CASE("ga: capacity-violating placements carry fitness zero") {
  const SolveRequest req = two_step_instance();
  Placement crowded;
  crowded.code_loc = {{"sa", "wa"}, {"sb", "wa"}};
  crowded.data_loc = {{"src", "wa"}, {"sa", "wa"}, {"sb", "wa"}};
  CHECK(ga_fitness(req, crowded) > 0.0);

  SolveRequest tight = req;
  tight.workers = {worker("wa", 1), worker("wb", 1)};
  CHECK(ga_fitness(tight, crowded) == 0.0);

  Placement incomplete = crowded;
  incomplete.code_loc.erase("sb");
  CHECK(ga_fitness(req, incomplete) == 0.0);
}

TEST_CASE("ga reaches the oracle optimum on most seeds of the two-step instance") {
  const SolveRequest base = two_step_instance();
  const double best = brute_force_oracle(base).objective;
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    SolveRequest req = base;
    req.seed = seed;
    const SolveResult res = solve_ga(req);
    if (res.status == SolveStatus::Optimal &&
        res.objective <= best + 1e-9)
      ++hits;
  }
  CHECK(hits >= 20);  // >= 80% of 25 seeds
}

TEST_CASE("every strategy returns constraint-satisfying placements") {
  std::mt19937_64 rng(1357);
  for (int round = 0; round < 40; ++round) {
    SolveRequest req = random_instance(rng);
    req.params.solver_time_limit_ms = 50;
    const auto check = [&](const SolveResult& res) {
      if (res.status == SolveStatus::Infeasible) return;
      std::string why;
      const bool ok = placement_valid(req, res.placement, &why);
      INFO("violation: ", why);
      REQUIRE(ok);
    };
    check(solve_exact(req));
    check(solve_ga(req));
    check(solve_crrb(req));
    check(solve_random(req));
    check(solve_local(req));
  }
}
