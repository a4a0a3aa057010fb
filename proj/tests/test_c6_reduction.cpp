#include <numeric>

#include "cyclesim/c6_reduction.hpp"
#include "cyclesim/errors.hpp"
#include "cyclesim/generators.hpp"
#include "cyclesim/oracles.hpp"
#include "cyclesim/rng.hpp"
#include "doctest.h"

using namespace cyclesim;

namespace {

std::vector<std::uint32_t> random_colors(std::size_t n, std::uint64_t key) {
  std::vector<std::uint32_t> c(n);
  for (Vertex v = 0; v < n; ++v) c[v] = trial_color(key, v, 6);
  return c;
}

// Random graph with every degree below sqrt(n).
Graph bounded_degree(std::size_t n, double p, std::uint64_t seed) {
  auto g = gen_random(n, p, seed);
  std::vector<Edge> kept;
  std::vector<std::size_t> deg(n, 0);
  for (auto [a, b] : g.edges())
    if ((deg[a] + 1) * (deg[a] + 1) < n && (deg[b] + 1) * (deg[b] + 1) < n) {
      kept.push_back({a, b});
      ++deg[a];
      ++deg[b];
    }
  return Graph::from_edges(n, kept);
}

}  // namespace

TEST_CASE("C6 in color order gives two directed triangles") {
  std::vector<std::uint32_t> colors(6);
  std::iota(colors.begin(), colors.end(), 0u);
  auto d = build_reduction_graph(cycle_graph(6), colors);
  CHECK(d.arcs() == 6);
  CHECK(count_directed_triangles(d) == 2);
  CHECK(d.has_arc(0, 2));
  CHECK(d.has_arc(2, 4));
  CHECK(d.has_arc(4, 0));
  CHECK(d.has_arc(1, 3));
  CHECK(d.has_arc(3, 5));
  CHECK(d.has_arc(5, 1));
  auto tri = find_directed_triangle(d);
  REQUIRE(tri);
  CHECK(*tri == std::array<Vertex, 3>{0, 2, 4});
  CHECK(validate_witness(cycle_graph(6), lift_triangle(cycle_graph(6), colors, *tri), 6));
  auto w = find_well_colored_c6(cycle_graph(6), colors);
  REQUIRE(w);
  CHECK(validate_witness(cycle_graph(6), *w, 6));
}

TEST_CASE("reversed color order is also well colored") {
  std::vector<std::uint32_t> colors{5, 4, 3, 2, 1, 0};
  CHECK(find_well_colored_c6(cycle_graph(6), colors));
  CHECK(count_directed_triangles(build_reduction_graph(cycle_graph(6), colors)) == 2);
  std::vector<std::uint32_t> bad{0, 1, 2, 3, 5, 4};
  CHECK_FALSE(find_well_colored_c6(cycle_graph(6), bad));
  CHECK_FALSE(find_directed_triangle(build_reduction_graph(cycle_graph(6), bad)));
}

TEST_CASE("C6-free graphs never produce a directed triangle") {
  for (const auto& g : {cycle_graph(5), petersen_graph(), gen_tree(20, 3), cycle_graph(12)})
    for (std::uint64_t t = 0; t < 100; ++t)
      CHECK_FALSE(find_directed_triangle(build_reduction_graph(g, random_colors(g.n(), derive(7, t)))));
}

TEST_CASE("directed triangle iff well-colored C6") {
  std::size_t positive = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto g = bounded_degree(24, 0.3, 40 + s);
    CHECK(g.max_degree() * g.max_degree() < g.n());
    for (std::uint64_t t = 0; t < 40; ++t) {
      auto c = random_colors(g.n(), derive(s, t));
      auto tri = find_directed_triangle(build_reduction_graph(g, c));
      auto w = find_well_colored_c6(g, c);
      REQUIRE(tri.has_value() == w.has_value());
      if (tri) {
        ++positive;
        CHECK(validate_witness(g, lift_triangle(g, c, *tri), 6));
      }
    }
  }
  CHECK(positive > 0);
}

TEST_CASE("reduction pipeline") {
  CHECK(reduction_iterations(16) == 16);
  CHECK_THROWS_AS(build_reduction_graph(cycle_graph(6), std::vector<std::uint32_t>{0, 1}), ConfigError);

  // The heavy stage cannot fire on a C6-free graph, so a reduced instance comes back.
  auto free = reduce_c6_to_directed_triangles(disjoint_union(star_graph(8), cycle_graph(5)), 3);
  REQUIRE(std::holds_alternative<ReducedInstance>(free));
  const auto& r = std::get<ReducedInstance>(free);
  CHECK(r.removed == std::vector<Vertex>{0});
  CHECK(r.colors.size() == 14);
  CHECK_FALSE(find_directed_triangle(r.graph));

  // A C6 through a hub of degree 10 in n = 40 is found by the heavy stage.
  auto edges = cycle_graph(6).edges();
  for (Vertex i = 0; i < 8; ++i) edges.push_back({0, 6 + i});
  auto hub = Graph::from_edges(40, edges);
  std::size_t early = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    DetectOptions opt;
    opt.mode = SampleMode::God;
    auto res = reduce_c6_to_directed_triangles(hub, s, opt);
    if (auto* e = std::get_if<EarlyFound>(&res)) {
      ++early;
      CHECK(validate_witness(hub, e->witness, 6));
    } else {
      CHECK(std::get<ReducedInstance>(res).removed == std::vector<Vertex>{0});
      CHECK(std::get<ReducedInstance>(res).graph.arcs() == 0);
    }
  }
  CHECK(early >= 7);
}
