#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>

#include "congest_common.hpp"
#include "cyclesim/congest_cycles.hpp"
#include "cyclesim/errors.hpp"
#include "cyclesim/oracles.hpp"
#include "cyclesim/rng.hpp"

namespace cyclesim {

std::uint64_t girth_light_cap(std::size_t n, std::uint32_t k) {
  if (k < 4) throw ConfigError("girth phases start at k = 4");
  return int_root(n, k / 2);
}

std::uint64_t girth_heavy_samples(std::size_t n, std::uint32_t k, double factor) {
  if (k < 4) throw ConfigError("girth phases start at k = 4");
  if (n < 2) return 1;
  double d = 1.0 / (k / 2);
  return static_cast<std::uint64_t>(std::ceil(factor * std::pow(static_cast<double>(n), 1.0 - d) * std::log2(n)));
}

namespace {

using detail::back_trace;
using detail::PredMap;
using detail::run_programs;

struct Receipt {
  Vertex origin, sender;
  std::uint32_t hop;
};

struct Hit {
  Vertex node, origin, w1, w2;
  auto operator<=>(const Hit&) const = default;
};

// Shared output of one phase run: first-receipt predecessors and rejecting nodes.
struct PhaseOut {
  PredMap pred;
  std::vector<Hit> hits;
};

// u rejects on origin v heard from two distinct neighbors at floor(k/2) and ceil(k/2) hops.
void detect(Vertex u, const std::vector<Receipt>& rec, std::uint32_t k, std::vector<Hit>& hits) {
  const std::uint32_t lo = k / 2, hi = (k + 1) / 2;
  std::map<Vertex, std::pair<std::set<Vertex>, std::set<Vertex>>> by_origin;
  for (const auto& r : rec) {
    if (r.origin == u) continue;
    if (r.hop == lo) by_origin[r.origin].first.insert(r.sender);
    if (r.hop == hi) by_origin[r.origin].second.insert(r.sender);
  }
  for (auto& [o, sides] : by_origin) {
    auto& [a, b] = sides;
    if (a.empty() || b.empty()) continue;
    Vertex w1 = *a.begin();
    auto it = std::find_if(b.begin(), b.end(), [&](Vertex w) { return w != w1; });
    if (it != b.end()) hits.push_back({u, o, w1, *it});
  }
}

CycleWitness pair_witness(const PredMap& pred, const Hit& h) {
  auto left = back_trace(pred, h.w1, h.origin);
  auto right = back_trace(pred, h.w2, h.origin);
  CycleWitness w;
  w.vertices.push_back(h.origin);
  w.vertices.insert(w.vertices.end(), left.rbegin(), left.rend());
  w.vertices.push_back(h.node);
  w.vertices.insert(w.vertices.end(), right.begin(), right.end());
  return w;
}

std::map<Vertex, std::vector<Vertex>> group_by_origin(std::span<const Incoming> inbox) {
  std::map<Vertex, std::vector<Vertex>> out;
  for (const auto& in : inbox) out[static_cast<Vertex>(in.word[0])].push_back(in.from);
  for (auto& [o, s] : out) std::sort(s.begin(), s.end());
  return out;
}

// Every node streams its sorted neighbor list, one id per round.
class TriangleNode : public NodeProgram {
 public:
  TriangleNode(const Graph& g, std::uint64_t end, std::vector<std::array<Vertex, 3>>& hits)
      : g_(g), end_(end), hits_(hits) {}

  void step(NodeContext& ctx) override {
    const Vertex v = ctx.id();
    const auto r = ctx.round();
    for (const auto& in : ctx.inbox()) {
      auto x = static_cast<Vertex>(in.word[0]);
      if (x != v && g_.has_edge(v, x)) hits_.push_back({v, in.from, x});
    }
    if (r >= end_) {
      ctx.halt();
      return;
    }
    if (r < g_.degree(v)) {
      ctx.send_all(Word{g_.adj(v)[r]});
      return;
    }
    ctx.sleep_until(end_, true);
  }

 private:
  const Graph& g_;
  std::uint64_t end_;
  std::vector<std::array<Vertex, 3>>& hits_;
};

// Light phase: start[i] is the round step i begins; tokens first heard at hop i-1 go out in step i.
struct LightSetup {
  std::uint32_t k = 0, depth = 0;
  std::vector<char> active;
  std::vector<std::uint64_t> start;  // index 1..depth+1
  std::vector<std::uint64_t> cap;    // index i: tokens a node may forward in step i
};

class GirthLightNode : public NodeProgram {
 public:
  GirthLightNode(const LightSetup& s, PhaseOut& out) : s_(s), out_(out) {}

  void step(NodeContext& ctx) override {
    const Vertex v = ctx.id();
    const auto r = ctx.round();
    const auto end = s_.start[s_.depth + 1];
    if (!s_.active[v]) {
      if (r >= end) {
        ctx.halt();
        return;
      }
      ctx.sleep_until(end);
      return;
    }
    if (r == 0) {
      for (Vertex u : ctx.neighbors())
        if (s_.active[u]) ctx.send(u, Word{v, 1});
      ctx.sleep_until(s_.start[2]);
      ++step_;
      return;
    }
    ++step_;  // now in step_ = i; arrivals carry hop i-1
    const auto hop = static_cast<std::uint32_t>(step_ - 1);
    std::vector<std::pair<Vertex, const std::vector<Vertex>*>> fwd;
    auto groups = group_by_origin(ctx.inbox());
    for (const auto& [o, senders] : groups) {
      for (Vertex w : senders) rec_.push_back({o, w, hop});
      if (o == v || out_.pred[v].contains(o)) continue;
      out_.pred[v][o] = senders.front();
      if (hop < s_.depth) fwd.push_back({o, &senders});
    }
    if (r == end) {
      detect(v, rec_, s_.k, out_.hits);
      ctx.halt();
      return;
    }
    if (fwd.size() > s_.cap[step_]) fault("girth light phase: token count above its bound");
    for (const auto& [o, senders] : fwd)
      for (Vertex u : ctx.neighbors())
        if (s_.active[u] && !std::binary_search(senders->begin(), senders->end(), u))
          ctx.send(u, Word{o, hop + 1});
    ctx.sleep_until(s_.start[step_ + 1]);
  }

 private:
  const LightSetup& s_;
  PhaseOut& out_;
  std::size_t step_ = 0;
  std::vector<Receipt> rec_;
};

class GirthSelfNode : public NodeProgram {
 public:
  GirthSelfNode(Vertex s, std::uint32_t k, PhaseOut& out) : s_(s), k_(k), out_(out) {}

  void step(NodeContext& ctx) override {
    const Vertex v = ctx.id();
    const auto r = ctx.round();
    if (r == 0) {
      if (v == s_) ctx.send_all(Word{s_});
    } else if (!ctx.inbox().empty()) {
      std::vector<Vertex> senders;
      for (const auto& in : ctx.inbox()) senders.push_back(in.from);
      std::sort(senders.begin(), senders.end());
      if (v == s_) {
        if (out_.hits.empty()) out_.hits.push_back({s_, s_, senders.front(), static_cast<Vertex>(r)});
      } else if (!out_.pred[v].contains(s_)) {
        out_.pred[v][s_] = senders.front();
        if (r < k_)
          for (Vertex u : ctx.neighbors())
            if (!std::binary_search(senders.begin(), senders.end(), u)) ctx.send(u, Word{s_});
      }
    }
    if (r >= k_) {
      ctx.halt();
      return;
    }
    ctx.sleep_until(k_, true);
  }

 private:
  Vertex s_;
  std::uint32_t k_;
  PhaseOut& out_;
};

// BFS from N(s) in which every node forwards at most one token, the first it hears.
class GirthNsNode : public NodeProgram {
 public:
  GirthNsNode(const Graph& g, Vertex s, std::uint32_t k, PhaseOut& out) : g_(g), s_(s), k_(k), out_(out) {}

  void step(NodeContext& ctx) override {
    const Vertex v = ctx.id();
    const auto r = ctx.round();
    const std::uint32_t depth = (k_ + 1) / 2;
    if (r == 0) {
      if (v != s_ && g_.has_edge(v, s_)) {
        forwarded_ = true;
        for (Vertex u : ctx.neighbors())
          if (u != s_) ctx.send(u, Word{v, 1});
      }
    } else if (v != s_) {
      auto groups = group_by_origin(ctx.inbox());
      for (const auto& [o, senders] : groups)
        for (Vertex w : senders) rec_.push_back({o, w, static_cast<std::uint32_t>(r)});
      if (!forwarded_ && !groups.empty() && r < depth) {
        const auto& [o, senders] = *groups.begin();
        forwarded_ = true;
        out_.pred[v][o] = senders.front();
        for (Vertex u : ctx.neighbors())
          if (u != s_ && !std::binary_search(senders.begin(), senders.end(), u))
            ctx.send(u, Word{o, static_cast<std::int64_t>(r) + 1});
      }
    }
    if (r >= depth) {
      if (v != s_) detect(v, rec_, k_, out_.hits);
      ctx.halt();
      return;
    }
    ctx.sleep_until(depth, true);
  }

 private:
  const Graph& g_;
  Vertex s_;
  std::uint32_t k_;
  PhaseOut& out_;
  bool forwarded_ = false;
  std::vector<Receipt> rec_;
};

template <class Make>
std::uint64_t run_phase(const Graph& g, std::uint64_t limit, Make make) {
  std::vector<std::unique_ptr<NodeProgram>> progs;
  for (Vertex v = 0; v < g.n(); ++v) progs.push_back(make(v));
  return run_programs(g, progs, limit);
}

// Witness of the least rejecting node, if its cycle is a simple k-cycle.
std::optional<CycleWitness> pick(const Graph& g, const PhaseOut& out, std::uint32_t k) {
  auto h = *std::min_element(out.hits.begin(), out.hits.end());
  auto w = pair_witness(out.pred, h);
  if (validate_witness(g, w, k)) return w;
  return std::nullopt;
}

}  // namespace

CongestGirthReport exact_girth_congest(const Graph& g, std::uint64_t seed, const GirthOptions& opt) {
  const std::size_t n = g.n();
  const Girth truth = brute_girth(g);
  const std::uint64_t root = derive(seed, "girth");
  CongestGirthReport rep;

  auto halt = [&](std::uint32_t k, const char* step, std::optional<CycleWitness> w) {
    if (truth.is_infinite() || k < truth.value()) fault("girth phase " + std::to_string(k) + " halted below the girth");
    rep.girth = Girth::of(k);
    rep.phase = k;
    rep.step = step;
    rep.witness = std::move(w);
    rep.trace.back().halted = true;
    return rep;
  };
  auto record = [&](std::uint32_t k, const char* step, std::uint64_t rounds) {
    rep.trace.push_back({k, step, false, rounds});
    rep.rounds += rounds;
  };

  {
    std::vector<std::array<Vertex, 3>> tri;
    const std::uint64_t end = g.max_degree();
    auto rounds = run_phase(g, end, [&](Vertex) { return std::make_unique<TriangleNode>(g, end, tri); });
    record(3, "triangle", rounds);
    if (!tri.empty()) {
      auto t = *std::min_element(tri.begin(), tri.end());
      return halt(3, "triangle", CycleWitness{{t[0], t[1], t[2]}});
    }
  }

  for (std::uint32_t k = 4;; ++k) {
    if (k >= 64 || (std::uint64_t{1} << k) > n) {
      // Past log2 n the graph is sparse enough to collect whole: pipelined upcast of every edge.
      record(k, "gather", g.m() + n);
      auto c = shortest_cycle(g);
      rep.girth = c ? Girth::of(static_cast<std::uint32_t>(c->length())) : Girth::infinite();
      rep.step = "gather";
      rep.witness = c;
      return rep;
    }

    LightSetup ls;
    ls.k = k;
    ls.depth = (k + 1) / 2;
    const auto cap = std::max<std::uint64_t>(1, girth_light_cap(n, k));
    ls.active.resize(n);
    for (Vertex v = 0; v < n; ++v) ls.active[v] = g.degree(v) <= cap;
    ls.start.assign(2, 0);
    ls.cap.assign(2, 1);
    for (std::uint32_t i = 1; i <= ls.depth; ++i) {
      if (i > 1) ls.cap.push_back(ls.cap.back() * cap);
      ls.start.push_back(ls.start.back() + ls.cap[i]);
    }
    PhaseOut light;
    auto rounds = run_phase(g, ls.start.back(), [&](Vertex) { return std::make_unique<GirthLightNode>(ls, light); });
    record(k, "light", rounds);
    if (!light.hits.empty()) return halt(k, "light", pick(g, light, k));

    const auto samples = girth_heavy_samples(n, k, opt.heavy_factor);
    const auto phase_key = derive(root, k);
    std::uint64_t heavy_rounds = 0;
    for (std::uint64_t j = 0; j < samples; ++j) {
      const auto s = static_cast<Vertex>(bounded_from(stream_at(phase_key, j), n));
      PhaseOut self;
      heavy_rounds += run_phase(g, k, [&](Vertex) { return std::make_unique<GirthSelfNode>(s, k, self); });
      if (!self.hits.empty()) {
        record(k, "heavy", heavy_rounds);
        auto last = self.hits.front().w1;
        auto seq = back_trace(self.pred, last, s);
        CycleWitness w{{s}};
        w.vertices.insert(w.vertices.end(), seq.rbegin(), seq.rend());
        return halt(k, "heavy", validate_witness(g, w, k) ? std::optional(w) : std::nullopt);
      }
      PhaseOut ns;
      heavy_rounds +=
          run_phase(g, (k + 1) / 2, [&](Vertex) { return std::make_unique<GirthNsNode>(g, s, k, ns); });
      if (!ns.hits.empty()) {
        record(k, "heavy", heavy_rounds);
        return halt(k, "heavy", pick(g, ns, k));
      }
    }
    record(k, "heavy", heavy_rounds);
  }
}

}  // namespace cyclesim
