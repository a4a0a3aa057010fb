#include <sstream>

#include "cyclesim/edge_list.hpp"
#include "cyclesim/errors.hpp"
#include "cyclesim/generators.hpp"
#include "cyclesim/oracles.hpp"
#include "cyclesim/turan.hpp"
#include "doctest.h"

using namespace cyclesim;

TEST_CASE("gen_random extremes and determinism") {
  CHECK(gen_random(5, 0.0, 1).m() == 0);
  CHECK(gen_random(5, 1.0, 1).m() == 10);
  auto a = gen_random(100, 0.1, 7), b = gen_random(100, 0.1, 7);
  CHECK(a.edges() == b.edges());
  CHECK(a.m() == 474);  // frozen
  CHECK(gen_random(100, 0.1, 8).edges() != a.edges());
}

TEST_CASE("plant_cycle") {
  auto c6 = plant_cycle(Graph(6), 6, 1);
  CHECK(c6.graph.m() == 6);
  CHECK(brute_girth(c6.graph) == Girth::of(6));
  CHECK(validate_witness(c6.graph, c6.cycle, 6));

  auto p = plant_cycle(Graph(10), 4, 3);
  CHECK(p.graph.m() == 4);
  CHECK(brute_girth(p.graph) == Girth::of(4));

  auto t = plant_cycle(cycle_graph(5), 3, 11);
  CHECK(brute_girth(t.graph) == Girth::of(3));
  CHECK_THROWS_AS(plant_cycle(Graph(4), 5, 1), ConfigError);
}

TEST_CASE("brute_girth small graphs") {
  CHECK(brute_girth(cycle_graph(5)) == Girth::of(5));
  CHECK(brute_girth(complete_graph(4)) == Girth::of(3));
  CHECK(brute_girth(gen_tree(30, 2)).is_infinite());
  CHECK(brute_girth(Graph(1)).is_infinite());
  CHECK_THROWS_AS(brute_girth(path_graph(3)).value(), InvariantFault);

  auto pet = petersen_graph();
  CHECK(pet.m() == 15);
  CHECK(brute_girth(pet) == Girth::of(5));
  CHECK_FALSE(find_cycle_of_length(pet, 3));
  CHECK_FALSE(find_cycle_of_length(pet, 4));
  auto c5 = find_cycle_of_length(pet, 5);
  REQUIRE(c5);
  CHECK(validate_witness(pet, *c5, 5));
  // Petersen is not Hamiltonian.
  CHECK_FALSE(find_cycle_of_length(pet, 10));
  CHECK(find_cycle_of_length(pet, 9));
}

TEST_CASE("brute_girth agrees with shortest_cycle witnesses") {
  for (std::uint64_t s = 0; s < 300; ++s) {
    std::size_t n = 5 + s % 40;
    auto g = gen_random(n, 0.02 + 0.01 * static_cast<double>(s % 9), s);
    auto gi = brute_girth(g);
    auto w = shortest_cycle(g);
    if (gi.is_infinite()) {
      CHECK_FALSE(w);
    } else {
      REQUIRE(w);
      CHECK(validate_witness(g, *w, gi.value()));
    }
  }
}

TEST_CASE("shortest_cycle_through is exact") {
  for (std::uint64_t s = 0; s < 60; ++s) {
    auto g = gen_random(14, 0.18, 100 + s);
    for (Vertex v = 0; v < g.n(); ++v) {
      auto w = shortest_cycle_through(g, v);
      std::optional<std::size_t> best;
      for (std::size_t len = 3; len <= g.n() && !best; ++len) {
        // any cycle of this length through v?
        for (const auto& ins : enumerate_subgraph(g, SubgraphPattern::cycle(len)))
          if (std::binary_search(ins.vertices.begin(), ins.vertices.end(), v)) {
            best = len;
            break;
          }
        if (len >= 7) break;
      }
      if (best) {
        REQUIRE(w);
        CHECK(w->length() == *best);
        CHECK(w->vertices.front() == v);
        CHECK(validate_witness(g, *w));
      }
    }
  }
}

TEST_CASE("enumerate_subgraph") {
  auto k4 = complete_graph(4);
  CHECK(enumerate_subgraph(k4, SubgraphPattern::complete(3)).size() == 4);
  CHECK(enumerate_subgraph(cycle_graph(6), SubgraphPattern::cycle(6)).size() == 1);
  CHECK(enumerate_subgraph(k4, SubgraphPattern::cycle(4)).size() == 3);
  CHECK(enumerate_subgraph(complete_graph(5), SubgraphPattern::cycle(5)).size() == 12);
  CHECK(enumerate_subgraph(k4, SubgraphPattern::path(4)).size() == 12);
  CHECK(enumerate_subgraph(petersen_graph(), SubgraphPattern::cycle(5)).size() == 12);
  CHECK(enumerate_subgraph(k4, SubgraphPattern::cycle(4), 1).size() == 1);
  for (const auto& ins : enumerate_subgraph(k4, SubgraphPattern::cycle(4)))
    CHECK(make_instance(SubgraphPattern::cycle(4), ins.map).edges == ins.edges);
  CHECK_THROWS_AS(enumerate_subgraph(k4, SubgraphPattern::cycle(11)), ConfigError);
}

TEST_CASE("patterns") {
  auto c4 = SubgraphPattern::parse("C4");
  CHECK(c4.k() == 4);
  CHECK(c4.back_degrees() == std::vector<std::size_t>{0, 1, 1, 2});
  CHECK(SubgraphPattern::parse("P4").back_degrees() == std::vector<std::size_t>{0, 1, 1, 1});
  CHECK(SubgraphPattern::parse("K3").k() == 3);
  auto e = SubgraphPattern::parse("edges:0-1,1-2,2-0,2-3");
  CHECK(e.p == 4);
  CHECK(e.k() == 4);
  CHECK_THROWS_AS(SubgraphPattern::parse("Q4"), ConfigError);
}

TEST_CASE("prune_degenerate") {
  CHECK(prune_degenerate(path_graph(4)).m() == 0);
  auto c5p = add_edges(pad_isolated(cycle_graph(5), 6), std::vector<Edge>{{0, 5}});
  CHECK(prune_degenerate(c5p) == pad_isolated(cycle_graph(5), 6));
  CHECK(prune_degenerate(gen_tree(40, 9)).m() == 0);
  for (std::uint64_t s = 0; s < 1000; ++s) {
    std::size_t n = 2 + s % 63;
    auto g = gen_random(n, 1.5 / static_cast<double>(n) + 0.001 * static_cast<double>(s % 7), 5000 + s);
    auto p = prune_degenerate(g);
    CHECK(brute_girth(p) == brute_girth(g));
    for (Vertex v = 0; v < n; ++v) CHECK((p.degree(v) == 0 || p.degree(v) >= 2));
  }
}

TEST_CASE("turan gate") {
  CHECK_FALSE(turan_c2k_gate(100, 5000, 2));
  CHECK_FALSE(turan_c2k_gate(10, 0, 3));
  CHECK(turan_c2k_gate(16, 2500, 2));
  CHECK_FALSE(turan_c2k_gate(16, 2176, 2));
  CHECK(turan_c2k_gate(16, 2177, 2));
}

TEST_CASE("gate implies a 2k-cycle on small instances") {
  for (std::uint64_t s = 0; s < 200; ++s) {
    std::size_t n = 4 + s % 37;
    auto g = gen_random(n, 0.1 + 0.2 * static_cast<double>(s % 5), s);
    for (std::uint32_t k = 2; k <= 3; ++k)
      if (turan_c2k_gate(n, g.m(), k)) CHECK_FALSE(enumerate_subgraph(g, SubgraphPattern::cycle(2 * k), 1).empty());
  }
}

TEST_CASE("girth_turan_k") {
  CHECK(girth_turan_k(16, 80) == 2u);
  CHECK(girth_turan_k(16, 81) == 1u);
  CHECK_FALSE(girth_turan_k(16, 16).has_value());
  CHECK(girth_turan_k(256, 4352) == 2u);
  CHECK(girth_turan_k(256, 4353) == 1u);
  for (std::uint64_t n : {20u, 64u, 200u, 1000u}) {
    std::optional<std::uint32_t> prev;
    bool first = true;
    for (std::uint64_t m = 0; m <= n * (n - 1) / 2; m += 1 + m / 50) {
      auto k = girth_turan_k(n, m);
      if (!first && k) CHECK((!prev || *k <= *prev));
      if (!first && !prev) {
        // sparse can be followed by anything; a finite k never returns to sparse
      } else if (!first) {
        CHECK(k.has_value());
      }
      prev = k;
      first = false;
    }
  }
}

TEST_CASE("neighborhood") {
  auto n1 = neighborhood(cycle_graph(6), 0, 1);
  CHECK(n1.vertices == std::vector<Vertex>{0, 1, 5});
  CHECK(n1.edges == std::vector<Edge>{{0, 1}, {0, 5}});
  auto star = neighborhood(star_graph(4), 0, 1);
  CHECK(star.vertices.size() == 5);
  CHECK(star.edges.size() == 4);
  auto pet = neighborhood(petersen_graph(), 0, 2);
  CHECK(pet.vertices.size() == 10);
  CHECK(pet.edges.size() == 9);
  CHECK(neighborhood(cycle_graph(6), 2, 0).edges.empty());

  for (std::uint64_t s = 0; s < 100; ++s) {
    auto pl = gen_girth(40, 5 + s % 6, 20, s);
    auto gi = brute_girth(pl.graph);
    REQUIRE(gi == Girth::of(static_cast<std::uint32_t>(5 + s % 6)));
    for (Vertex v = 0; v < 40; ++v)
      for (std::size_t i = 1; 2 * i < gi.value(); ++i) {
        auto nb = neighborhood(pl.graph, v, i);
        CHECK(nb.edges.size() + 1 == nb.vertices.size());
      }
  }
}

TEST_CASE("validate_witness") {
  auto c6 = cycle_graph(6);
  CHECK(validate_witness(c6, {{0, 1, 2, 3, 4, 5}}, 6));
  CHECK_FALSE(validate_witness(c6, {{0, 1, 2, 0}}, 3));
  CHECK_FALSE(validate_witness(c6, {{0, 1, 2}}, 3));
  CHECK(validate_witness(complete_graph(4), {{0, 1, 2}}, 3));
  CHECK_FALSE(validate_witness(complete_graph(4), {{0, 1, 2}}, 4));
}

TEST_CASE("edge list io") {
  std::istringstream in("# test\n3 2\n0 1 # first\n1 2\n");
  auto g = read_edge_list(in);
  CHECK(g.n() == 3);
  CHECK(g.m() == 2);
  std::ostringstream out;
  write_edge_list(out, petersen_graph());
  std::istringstream back(out.str());
  CHECK(read_edge_list(back) == petersen_graph());

  std::istringstream empty("");
  CHECK_THROWS_AS(read_edge_list(empty), ConfigError);
  std::istringstream loop("2 1\n1 1\n");
  CHECK_THROWS_AS(read_edge_list(loop), ConfigError);
  std::istringstream dup("3 2\n0 1\n1 0\n");
  CHECK_THROWS_AS(read_edge_list(dup), ConfigError);
  std::istringstream range("3 1\n0 3\n");
  CHECK_THROWS_AS(read_edge_list(range), ConfigError);
}
