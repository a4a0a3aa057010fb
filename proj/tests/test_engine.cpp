#include <map>

#include "cyclesim/engine.hpp"
#include "cyclesim/errors.hpp"
#include "cyclesim/generators.hpp"
#include "cyclesim/rng.hpp"
#include "doctest.h"

using namespace cyclesim;

namespace {

struct HaltNow : NodeProgram {
  void step(NodeContext& ctx) override { ctx.halt(); }
};

struct Flood : NodeProgram {
  std::uint64_t reached_at = 0;
  bool have = false;
  void step(NodeContext& ctx) override {
    if (ctx.round() == 0 && ctx.id() == 0) {
      have = true;
      ctx.send_all(Word{0});
      ctx.halt();
      return;
    }
    if (!ctx.inbox().empty()) {
      have = true;
      reached_at = ctx.round();
      for (Vertex u : ctx.neighbors()) {
        bool sender = false;
        for (const auto& in : ctx.inbox()) sender |= in.from == u;
        if (!sender) ctx.send(u, Word{0});
      }
      ctx.halt();
    }
  }
};

struct Burst : NodeProgram {
  std::size_t got = 0;
  void step(NodeContext& ctx) override {
    if (ctx.id() == 0) {
      for (int i = 0; i < 5; ++i) ctx.send(1, Word{i});
      ctx.halt();
      return;
    }
    got += ctx.inbox().size();
    if (got == 5) ctx.halt();
  }
};

struct Forever : NodeProgram {
  void step(NodeContext&) override {}
};

struct Gossip : NodeProgram {
  std::uint64_t acc = 0;
  void step(NodeContext& ctx) override {
    for (const auto& in : ctx.inbox()) acc = mix64(acc ^ static_cast<std::uint64_t>(in.word[0]) ^ in.from);
    if (ctx.round() == 6) {
      ctx.halt();
      return;
    }
    SplitMix rng(derive(ctx.key(), ctx.round()));
    for (Vertex u : ctx.neighbors())
      if (rng.chance(0.5)) ctx.send(u, Word{static_cast<std::int64_t>(rng.below(ctx.n()))});
  }
};

struct Sleeper : NodeProgram {
  void step(NodeContext& ctx) override {
    if (ctx.round() == 0) {
      ctx.sleep_until(1'000'000'000'000ULL);
      return;
    }
    ctx.halt();
  }
};

}  // namespace

TEST_CASE("rng streams are frozen") {
  CHECK(mix64(0) == 0);
  CHECK(stream_at(0, 0) == 0xE220A8397B1DCDAFULL);
  SplitMix r(42);
  std::map<std::uint64_t, int> hist;
  for (int i = 0; i < 60000; ++i) ++hist[r.below(6)];
  for (auto [v, c] : hist) CHECK(std::abs(c - 10000) < 400);
  CHECK(trial_color(derive(7, "t"), 3, 10) == trial_color(derive(7, "t"), 3, 10));
  CHECK(derive(1, "a") != derive(1, "b"));
}

TEST_CASE("single node halting immediately takes zero rounds") {
  Graph g(1);
  Engine e(Topology::congest(g), 1);
  std::vector<HaltNow> p(1);
  auto r = e.run_all(p, 100);
  CHECK(r.status == RunStatus::Halted);
  CHECK(r.metrics.rounds == 0);
}

TEST_CASE("flood on C6 reaches the antipode at round 3") {
  auto g = cycle_graph(6);
  Engine e(Topology::congest(g), 1);
  std::vector<Flood> p(6);
  auto r = e.run_all(p, 100);
  CHECK(r.metrics.rounds == 3);
  CHECK(p[3].reached_at == 3);
  CHECK(p[1].reached_at == 1);
  CHECK(r.metrics.peak_link_load == 1);
}

TEST_CASE("five words on one link take five rounds") {
  auto g = path_graph(2);
  Engine e(Topology::congest(g), 1);
  std::vector<Burst> p(2);
  auto r = e.run_all(p, 100);
  CHECK(r.metrics.rounds == 5);
  CHECK(r.metrics.words_total == 5);
  CHECK(r.metrics.peak_link_load == 5);
  CHECK(p[1].got == 5);
}

TEST_CASE("round limit yields a timeout with partial metrics") {
  auto g = path_graph(3);
  Engine e(Topology::congest(g), 1);
  std::vector<Forever> p(3);
  auto r = e.run_all(p, 10);
  CHECK(r.status == RunStatus::Timeout);
  CHECK(r.metrics.rounds == 10);
}

TEST_CASE("sleeping nodes are fast-forwarded") {
  auto g = path_graph(2);
  Engine e(Topology::congest(g), 1);
  std::vector<Sleeper> p(2);
  auto r = e.run_all(p, ~0ULL);
  CHECK(r.metrics.rounds == 1'000'000'000'000ULL);
}

TEST_CASE("model violations fault") {
  struct BadSend : NodeProgram {
    void step(NodeContext& ctx) override { ctx.send(2, Word{1}); }
  };
  struct AfterHalt : NodeProgram {
    void step(NodeContext& ctx) override {
      ctx.halt();
      if (ctx.id() == 0) ctx.send(1, Word{1});
    }
  };
  struct Fat : NodeProgram {
    void step(NodeContext& ctx) override {
      if (ctx.id() == 0) ctx.send(1, Word{1LL << 40});
      ctx.halt();
    }
  };
  auto g = path_graph(3);
  {
    Engine e(Topology::congest(g), 1);
    std::vector<BadSend> p(3);
    CHECK_THROWS_AS(e.run_all(p, 5), InvariantFault);
  }
  {
    Engine e(Topology::congest(g), 1);
    std::vector<AfterHalt> p(3);
    CHECK_THROWS_AS(e.run_all(p, 5), InvariantFault);
  }
  {
    Engine e(Topology::congest(g), 1);
    std::vector<Fat> p(3);
    CHECK_THROWS_AS(e.run_all(p, 5), InvariantFault);
  }
}

TEST_CASE("strict runs are deterministic per seed") {
  auto g = gen_random(30, 0.2, 3);
  auto once = [&](std::uint64_t seed) {
    Engine e(Topology::congest(g), seed);
    std::vector<Gossip> p(30);
    auto r = e.run_all(p, 100);
    std::vector<std::uint64_t> acc;
    for (auto& x : p) acc.push_back(x.acc);
    return std::make_pair(r.metrics, acc);
  };
  auto a = once(9), b = once(9), c = once(10);
  CHECK(a == b);
  CHECK(a.second != c.second);
}

TEST_CASE("broadcast_all") {
  auto g = complete_graph(4);
  Engine e(Topology::clique(g), 1);
  std::vector<Word> deg;
  for (Vertex v = 0; v < 4; ++v) deg.push_back(Word{static_cast<std::int64_t>(g.degree(v))});
  auto all = e.broadcast_all(deg);
  std::int64_t sum = 0;
  for (auto& w : all) sum += w[0];
  CHECK(sum / 2 == 6);
  CHECK(e.metrics().rounds == 1);
  CHECK(e.metrics().words_total == 12);
  e.broadcast_all(deg);
  CHECK(e.metrics().rounds == 2);
  CHECK(e.metrics().words_total == 24);

  Graph one(1);
  Engine e1(Topology::clique(one), 1);
  e1.broadcast_all(std::vector<Word>{Word{0}});
  CHECK(e1.metrics().words_total == 0);

  Engine ec(Topology::congest(g), 1);
  CHECK_THROWS_AS(ec.broadcast_all(deg), ModelError);
}

TEST_CASE("route_load_balanced charging") {
  Graph g(50);
  {
    Engine e(Topology::clique(g), 1);
    std::vector<Message> m;
    for (Vertex v = 0; v < 50; ++v) m.push_back({v, 0, Word{v}});
    auto box = e.route(m, {1.0, 1});
    CHECK(box[0].size() == 50);
    CHECK(e.metrics().charged_routing_rounds == 16);
    CHECK(e.metrics().rounds == 16);
  }
  {
    Engine e(Topology::clique(g), 1);
    std::vector<Message> m;
    for (int i = 0; i < 150; ++i) m.push_back({static_cast<Vertex>(i % 50), 0, Word{i}});
    e.route(m, {3.0, 3});
    CHECK(e.metrics().charged_routing_rounds == 48);
    CHECK(e.metrics().words_total <= 50 * 50 * e.metrics().charged_routing_rounds / 16);
  }
  {
    Engine e(Topology::clique(g), 1);
    e.route({}, {1.0, 0});
    CHECK(e.metrics().charged_routing_rounds == 0);
    CHECK(e.metrics().primitive_calls == 1);
  }
  {
    Engine e(Topology::clique(g), 1);
    std::vector<Message> m;
    for (int i = 0; i < 150; ++i) m.push_back({static_cast<Vertex>(i % 50), 0, Word{i}});
    CHECK_THROWS_AS(e.route(m, {2.0, 3}), PreconditionViolation);
    CHECK_THROWS_AS(e.route({}, {1.0, 50 * 17}), PreconditionViolation);
  }
  Engine ec(Topology::congest(g), 1);
  CHECK_THROWS_AS(ec.route({}, {1.0, 0}), ModelError);
}
