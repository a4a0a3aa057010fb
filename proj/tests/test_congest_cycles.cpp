#include "cyclesim/congest_cycles.hpp"
#include "cyclesim/errors.hpp"
#include "cyclesim/generators.hpp"
#include "cyclesim/oracles.hpp"
#include "cyclesim/rng.hpp"
#include "doctest.h"

using namespace cyclesim;

namespace {

// C_{2k} on 0..2k-1 with `leaves` pendant vertices on node 0, padded to n.
Graph heavy_cycle(std::uint32_t k, std::size_t leaves, std::size_t n) {
  auto edges = cycle_graph(2 * k).edges();
  for (std::size_t i = 0; i < leaves; ++i) edges.push_back({0, static_cast<Vertex>(2 * k + i)});
  return Graph::from_edges(n, edges);
}

bool has_c2k(const Graph& g, std::uint32_t k) { return find_cycle_of_length(g, 2 * k).has_value(); }

}  // namespace

TEST_CASE("thresholds and budgets") {
  CHECK(token_caps(2) == std::vector<std::uint64_t>{1});
  CHECK(token_caps(3) == std::vector<std::uint64_t>{3, 3});
  CHECK(token_caps(4) == std::vector<std::uint64_t>{5, 30, 36});
  CHECK(token_caps(5) == std::vector<std::uint64_t>{101, 10201, 113322, 568120});
  CHECK_THROWS_AS(token_caps(6), ConfigError);
  CHECK_THROWS_AS(token_caps(1), ConfigError);
  CHECK(int_root(32, 5) == 2);
  CHECK(int_root(31, 5) == 1);
  CHECK(int_root(1000000, 3) == 100);
  CHECK(int_root(999999, 3) == 99);
  CHECK(default_light_trials(2) == 768);
  CHECK(default_light_trials(5) == 30000000000ULL);
  CHECK(default_heavy_iterations(16, 2) == 16);
}

TEST_CASE("light trial: engine and kernel agree") {
  std::size_t found = 0;
  for (std::uint64_t s = 0; s < 6; ++s) {
    auto g = gen_random(16, 0.22, 100 + s);
    for (std::uint32_t k : {2u, 3u}) {
      for (std::uint64_t t = 0; t < 250; ++t) {
        auto key = derive(s * 1000 + k, t);
        auto a = light_trial(g, k, key, Backend::Engine);
        auto b = light_trial(g, k, key, Backend::Kernel);
        REQUIRE(a == b);
        if (a.witness) {
          ++found;
          CHECK(validate_witness(g, *a.witness, 2 * k));
        }
      }
    }
  }
  CHECK(found > 5);
}

TEST_CASE("self BFS: engine and kernel agree") {
  std::size_t found = 0;
  for (std::uint64_t s = 0; s < 8; ++s) {
    auto g = gen_random(14, 0.3, 200 + s);
    for (std::uint32_t k : {2u, 3u}) {
      std::vector<Vertex> sources{static_cast<Vertex>(s % 14)};
      if (s % 3 == 0) sources.push_back(static_cast<Vertex>((s + 5) % 14));
      for (std::uint64_t t = 0; t < 60; ++t) {
        auto key = derive(s, t * 7 + k);
        auto a = self_bfs_trial(g, k, sources, key, Backend::Engine);
        auto b = self_bfs_trial(g, k, sources, key, Backend::Kernel);
        REQUIRE(a == b);
        if (a.witness) {
          ++found;
          CHECK(validate_witness(g, *a.witness, 2 * k));
        }
      }
    }
  }
  CHECK(found > 5);
}

TEST_CASE("neighbor BFS: engine and kernel agree") {
  std::size_t found = 0;
  for (std::uint64_t s = 0; s < 8; ++s) {
    auto g = gen_random(18, 0.3, 300 + s);
    for (std::uint32_t k : {2u, 3u, 4u}) {
      for (std::uint64_t t = 0; t < 40; ++t) {
        auto ik = derive(s * 10 + k, t);
        auto src = sample_sources(g, ik, 3, SampleMode::Priority, Backend::Kernel).sources;
        auto key = derive(ik, "ns");
        auto a = ns_bfs_trial(g, k, src, key, Backend::Engine);
        auto b = ns_bfs_trial(g, k, src, key, Backend::Kernel);
        REQUIRE(a == b);
        if (a.witness) {
          ++found;
          CHECK(validate_witness(g, *a.witness, 2 * k));
        }
      }
    }
  }
  CHECK(found > 5);
}

TEST_CASE("priority sampling: engine matches the ball minimum") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto g = disjoint_union(gen_random(12, 0.2, 400 + s), path_graph(9));
    for (std::uint64_t h : {1ULL, 2ULL, 4ULL, 50ULL}) {
      auto ik = derive(s, h);
      auto a = sample_sources(g, ik, h, SampleMode::Priority, Backend::Engine);
      auto b = sample_sources(g, ik, h, SampleMode::Priority, Backend::Kernel);
      CHECK(a.sources == b.sources);
      CHECK(a.rounds == h + 1);
      CHECK(a.rounds == b.rounds);
      CHECK(!a.sources.empty());
    }
  }
}

TEST_CASE("god sampling picks the least priority") {
  auto g = gen_random(30, 0.1, 5);
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto src = sample_sources(g, s, 1, SampleMode::God, Backend::Kernel);
    REQUIRE(src.sources.size() == 1);
    for (Vertex v = 0; v < 30; ++v) CHECK(priority_of(s, src.sources[0], 30) <= priority_of(s, v, 30));
    CHECK(src.rounds == 0);
  }
  CHECK(priority_of(1, 0, 4) >= 1);
  CHECK(priority_of(1, 0, 4) <= 64);
}

TEST_CASE("detectors never report on C_2k-free graphs") {
  DetectOptions opt;
  opt.backend = Backend::Engine;
  opt.light_trials = 30;
  opt.heavy_iterations = 3;
  opt.self_trials = 5;
  opt.horizon = 20;
  std::size_t graphs = 0;
  for (std::uint64_t s = 0; s < 60; ++s) {
    std::uint32_t k = 2 + static_cast<std::uint32_t>(s % 3);
    auto g = gen_random(14, 0.12, 500 + s);
    if (has_c2k(g, k)) continue;
    ++graphs;
    opt.mode = s % 2 ? SampleMode::God : SampleMode::Priority;
    CHECK_FALSE(detect_c2k_congest(g, k, s, opt).witness);
  }
  for (std::uint32_t k : {2u, 3u, 4u, 5u}) {
    CHECK_FALSE(detect_c2k_congest(cycle_graph(2 * k + 1), k, k, opt).witness);
    CHECK_FALSE(detect_c2k_congest(gen_tree(20, k), k, k, opt).witness);
  }
  CHECK(graphs > 10);
}

TEST_CASE("small examples") {
  CHECK_FALSE(detect_c2k_congest(cycle_graph(5), 2, 1).witness);
  auto k5 = detect_c2k_congest(complete_graph(5), 2, 1);
  REQUIRE(k5.witness);
  CHECK(validate_witness(complete_graph(5), *k5.witness, 4));
  CHECK(k5.stage.starts_with("heavy"));

  auto c4 = pad_isolated(cycle_graph(4), 9);
  auto light = detect_light_c2k(c4, 2, 3);
  REQUIRE(light.witness);
  CHECK(light.stage == "light");
  CHECK(light.rounds == 1 + 768 * (2 + 3));  // exchange, then color round, step 1, step 2 of length 3
}

TEST_CASE("heavy instances are found by the heavy detector") {
  for (std::uint32_t k : {2u, 3u}) {
    auto g = heavy_cycle(k, 6, 16);
    for (auto mode : {SampleMode::God, SampleMode::Priority}) {
      DetectOptions opt;
      opt.mode = mode;
      auto light = detect_light_c2k(g, k, 9, opt);
      CHECK_FALSE(light.witness);
      auto heavy = detect_heavy_c2k(g, k, 9, opt);
      REQUIRE(heavy.witness);
      CHECK(validate_witness(g, *heavy.witness, 2 * k));
    }
  }
}

TEST_CASE("engine backend runs a full small detector") {
  DetectOptions opt;
  opt.backend = Backend::Engine;
  opt.light_trials = 400;
  auto g = pad_isolated(cycle_graph(4), 6);
  auto a = detect_light_c2k(g, 2, 11, opt);
  opt.backend = Backend::Kernel;
  auto b = detect_light_c2k(g, 2, 11, opt);
  REQUIRE(a.witness);
  CHECK(a.witness == b.witness);
  CHECK(a.index == b.index);
  CHECK(a.rounds == b.rounds);

  DetectOptions h;
  h.heavy_iterations = 4;
  h.self_trials = 40;
  h.horizon = 10;
  auto hg = heavy_cycle(2, 3, 8);
  h.backend = Backend::Engine;
  auto c = detect_heavy_c2k(hg, 2, 4, h);
  h.backend = Backend::Kernel;
  auto d = detect_heavy_c2k(hg, 2, 4, h);
  REQUIRE(c.witness);
  CHECK(c.witness == d.witness);
  CHECK(c.stage == d.stage);
  CHECK(c.index == d.index);
  CHECK(c.trials_simulated == d.trials_simulated);
}

TEST_CASE("girth phase parameters") {
  CHECK(girth_light_cap(64, 4) == 8);
  CHECK(girth_light_cap(64, 5) == 8);
  CHECK(girth_light_cap(64, 6) == 4);
  CHECK(girth_light_cap(81, 8) == 3);
  CHECK(girth_heavy_samples(64, 4, 1.0) == 48);
  CHECK_THROWS_AS(girth_light_cap(64, 3), ConfigError);
}

TEST_CASE("exact girth: small graphs") {
  auto k4 = exact_girth_congest(complete_graph(4), 1);
  CHECK(k4.girth == Girth::of(3));
  CHECK(k4.step == "triangle");
  REQUIRE(k4.witness);
  CHECK(validate_witness(complete_graph(4), *k4.witness, 3));

  auto tree = exact_girth_congest(gen_tree(40, 2), 1);
  CHECK(tree.girth.is_infinite());
  CHECK(tree.step == "gather");

  for (std::uint64_t s = 0; s < 5; ++s) {
    auto pet = exact_girth_congest(petersen_graph(), s);
    CHECK(pet.girth == Girth::of(5));
    for (auto& ph : pet.trace)
      if (ph.k < 5) CHECK_FALSE(ph.halted);
    auto padded = exact_girth_congest(pad_isolated(petersen_graph(), 40), s);
    CHECK(padded.girth == Girth::of(5));
    CHECK(padded.phase == 5);
    REQUIRE(padded.witness);
    CHECK(validate_witness(petersen_graph(), *padded.witness, 5));
  }
}

TEST_CASE("exact girth: planted C7 in a path background") {
  auto edges = cycle_graph(7).edges();
  for (Vertex v = 7; v + 1 < 130; ++v)
    if (v % 10 != 0) edges.push_back({v, v + 1});
  auto g = Graph::from_edges(130, edges);
  for (std::uint64_t s = 0; s < 5; ++s) {
    auto r = exact_girth_congest(g, s);
    CHECK(r.girth == Girth::of(7));
    CHECK(r.phase == 7);
    CHECK(r.step == "light");
    REQUIRE(r.witness);
    CHECK(validate_witness(g, *r.witness, 7));
  }
}

TEST_CASE("exact girth: heavy cycles") {
  // Every node on the cycle has degree above the light cap, so only the heavy step can find it.
  for (std::uint32_t len : {4u, 5u, 6u}) {
    std::size_t found = 0;
    for (std::uint64_t s = 0; s < 10; ++s) {
      std::vector<Edge> edges = cycle_graph(len).edges();
      Vertex next = len;
      for (Vertex c = 0; c < len; ++c)
        for (int i = 0; i < 8; ++i) edges.push_back({c, next++});
      auto g = pad_isolated(Graph::from_edges(next, edges), 80);
      auto r = exact_girth_congest(g, s);
      CHECK(r.girth == Girth::of(len));
      if (r.phase == len && r.step == "heavy") ++found;
    }
    CHECK(found >= 7);
  }
}

TEST_CASE("exact girth agrees with the oracle on random instances") {
  for (std::uint64_t s = 0; s < 24; ++s) {
    std::size_t len = 4 + s % 3;
    auto pl = gen_girth(48, len, 30, 700 + s);
    auto r = exact_girth_congest(pl.graph, s);
    CHECK(r.girth == brute_girth(pl.graph));
    if (r.witness) CHECK(validate_witness(pl.graph, *r.witness, r.girth.value()));
  }
}
