#include "cyclesim/clique_girth.hpp"
#include "cyclesim/errors.hpp"
#include "cyclesim/generators.hpp"
#include "cyclesim/oracles.hpp"
#include "cyclesim/turan.hpp"
#include "doctest.h"

using namespace cyclesim;

namespace {

void check_knowledge(const Graph& g, const NeighborhoodState& st) {
  for (Vertex v = 0; v < g.n(); ++v) {
    if (g.degree(v) == 0) continue;
    CHECK(st.known[v] == neighborhood(g, v, st.a).edges);
  }
}

}  // namespace

TEST_CASE("estimate consistency") {
  CHECK(GirthEstimate::plus_one(9).consistent_with(Girth::of(10)));
  CHECK(GirthEstimate::plus_one(9).consistent_with(Girth::of(9)));
  CHECK_FALSE(GirthEstimate::plus_one(9).consistent_with(Girth::of(11)));
  CHECK_FALSE(GirthEstimate::plus_one(9).consistent_with(Girth::infinite()));
  CHECK(GirthEstimate::acyclic().consistent_with(Girth::infinite()));
  CHECK(GirthEstimate::exact({{0, 1, 2}}).str() == "Exact(3)");
}

TEST_CASE("preprocess") {
  {
    auto t = gen_tree(20, 4);
    Engine e(Topology::clique(t), 1);
    auto out = preprocess(e, t);
    REQUIRE(out.early);
    CHECK(out.early->kind == GirthEstimate::Kind::Acyclic);
  }
  {
    auto g = add_edges(pad_isolated(cycle_graph(5), 8), std::vector<Edge>{{0, 5}, {1, 6}, {6, 7}});
    Engine e(Topology::clique(g), 1);
    auto out = preprocess(e, g);
    REQUIRE(out.early);
    CHECK(out.early->str() == "Exact(5)");
    CHECK(validate_witness(g, *out.early->witness, 5));
    CHECK(e.metrics().primitive_calls == 2);
  }
  {
    auto g = gen_random(64, 0.5, 12);
    Engine e(Topology::clique(g), 1);
    auto out = preprocess(e, g);
    CHECK_FALSE(out.early);
    CHECK(out.pruned == prune_degenerate(g));
    if (prune_degenerate(g) == g) CHECK(out.pruned == g);
    CHECK(e.metrics().primitive_calls == 1);
  }
  for (std::uint64_t s = 0; s < 30; ++s) {
    auto g = gen_random(60, 0.5, s);
    auto extra = gen_tree(30, s);
    auto h = disjoint_union(g, extra);
    h = add_edges(h, std::vector<Edge>{{0, 60}});
    Engine e(Topology::clique(h), 1);
    auto out = preprocess(e, h);
    REQUIRE_FALSE(out.early);
    CHECK(out.pruned == prune_degenerate(h));
  }
}

TEST_CASE("phase1 shortcut and K4") {
  auto k4 = complete_graph(4);
  Engine e(Topology::clique(k4), 1);
  auto p1 = phase1_path_listing(e, k4);
  CHECK(p1.shortcut);
  CHECK(p1.state.a == 1);
  check_knowledge(k4, p1.state);
  auto st = p1.state;
  auto p2 = phase2_double(e, k4, st);
  // dense from the start: State 2 at a = 1 leaves g in {3, 4}
  CHECK(p2.kind == Phase2Outcome::Kind::State2);
  CHECK(p2.b == 1);
  CHECK(girth_plus_one(k4).estimate.str() == "Exact(3)");
}

TEST_CASE("phase1 listing above the k=5 boundary") {
  // n = 1024 is the smallest size at which k = 5 is not the sparse marker.
  const std::size_t n = 1024;
  auto g = gen_random(n, 0.0084, 77);
  auto k = girth_turan_k(n, g.m());
  REQUIRE(k == 5u);
  Engine e(Topology::clique(g), 1);
  Phase1Options opt;
  opt.load_factor = 4.0;
  auto p1 = phase1_path_listing(e, g, opt);
  CHECK_FALSE(p1.shortcut);
  CHECK(p1.segments == 2);
  CHECK(p1.subset_size == 1);
  CHECK_FALSE(p1.exact);  // no reported cycle is short enough to be covered
  CHECK(p1.state.a == 1);
  check_knowledge(g, p1.state);

  Engine strict(Topology::clique(g), 1);
  CHECK_THROWS_AS(phase1_path_listing(strict, g), PreconditionViolation);
}

TEST_CASE("phase1 with one segment sees every cycle") {
  const std::size_t n = 1024;
  auto g = gen_random(n, 0.0084, 5);
  REQUIRE(girth_turan_k(n, g.m()) == 5u);
  auto gi = brute_girth(g);
  Engine e(Topology::clique(g), 1);
  Phase1Options opt;
  opt.load_factor = 8.0;
  opt.segments = 1;
  auto p1 = phase1_path_listing(e, g, opt);
  REQUIRE(p1.exact);
  CHECK(p1.exact->consistent_with(gi));
  CHECK(validate_witness(g, *p1.exact->witness, p1.exact->value));
}

TEST_CASE("phase1 step 2 learns exact neighborhoods") {
  // A forced large k puts a high-girth graph into the regime where step 2 runs.
  auto g = gen_girth(300, 9, 200, 6).graph;
  REQUIRE(brute_girth(g).value() == 9);
  for (std::uint32_t r : {2u, 3u, 4u}) {
    Engine e(Topology::clique(g), 1);
    Phase1Options opt;
    opt.k = 16;
    opt.segments = 5;
    opt.radius = r;
    opt.load_factor = 64.0;
    auto p1 = phase1_path_listing(e, g, opt);
    CHECK_FALSE(p1.shortcut);
    CHECK(p1.subset_size == 4);
    CHECK_FALSE(p1.exact);
    CHECK(p1.state.a == r);
    check_knowledge(g, p1.state);
  }
  Engine e(Topology::clique(g), 1);
  Phase1Options opt;
  opt.k = 16;
  opt.segments = 5;
  opt.radius = 5;
  opt.load_factor = 64.0;
  CHECK_THROWS_AS(phase1_path_listing(e, g, opt), InvariantFault);
}

TEST_CASE("phase1 step 2 on a forest") {
  auto g = gen_tree(120, 3);
  Engine e(Topology::clique(g), 1);
  Phase1Options opt;
  opt.k = 8;
  opt.segments = 2;
  opt.radius = 3;
  opt.load_factor = 64.0;
  auto p1 = phase1_path_listing(e, g, opt);
  CHECK_FALSE(p1.exact);
  CHECK(p1.state.a == 3);
  check_knowledge(g, p1.state);
}

TEST_CASE("phase2 on cycles tracks the neighborhood oracle") {
  for (std::size_t len : {7u, 8u, 10u, 13u, 16u}) {
    auto g = cycle_graph(len);
    Engine e(Topology::clique(g), 1);
    NeighborhoodState st{1, {}};
    for (Vertex v = 0; v < len; ++v) st.known.push_back(neighborhood(g, v, 1).edges);
    for (int it = 0; it < 8; ++it) {
      auto out = phase2_double(e, g, st);
      check_knowledge(g, st);
      CHECK(out.primitives <= 8);
      if (out.kind == Phase2Outcome::Kind::Exact) {
        CHECK(out.exact->value == len);
        break;
      }
      if (out.kind == Phase2Outcome::Kind::State2) {
        CHECK(GirthEstimate::plus_one(2 * out.b + 1).consistent_with(Girth::of(static_cast<std::uint32_t>(len))));
        break;
      }
    }
  }
}

TEST_CASE("phase2 rejects cyclic knowledge") {
  auto g = cycle_graph(4);
  Engine e(Topology::clique(g), 1);
  NeighborhoodState st{2, {}};
  for (Vertex v = 0; v < 4; ++v) st.known.push_back(neighborhood(g, v, 2).edges);
  CHECK_THROWS_AS(phase2_double(e, g, st), InvariantFault);
}

TEST_CASE("girth_plus_one small graphs") {
  auto pet = girth_plus_one(petersen_graph());
  CHECK(pet.estimate.consistent_with(Girth::of(5)));
  auto c7 = girth_plus_one(cycle_graph(7));
  CHECK(c7.estimate.str() == "Exact(7)");
  CHECK(c7.path == "gather");
  CHECK(girth_plus_one(gen_tree(50, 1)).estimate.str() == "Acyclic");
  CHECK(girth_plus_one(Graph(1)).estimate.str() == "Acyclic");
  auto k = girth_plus_one(complete_graph(30));
  CHECK(k.estimate.str() == "PlusOne(3)");
}

TEST_CASE("girth_plus_one agrees with the oracle on dense and sparse graphs") {
  for (std::uint64_t s = 0; s < 40; ++s) {
    std::size_t n = 20 + (s * 37) % 100;
    double p = s % 2 ? 0.4 : 12.0 / static_cast<double>(n);
    auto g = gen_random(n, p, 900 + s);
    auto rep = girth_plus_one(g, s);
    CHECK(rep.estimate.consistent_with(brute_girth(g)));
    if (rep.estimate.kind == GirthEstimate::Kind::Exact)
      CHECK(validate_witness(g, *rep.estimate.witness, rep.estimate.value));
  }
}
