#include "cyclesim/congest_cycles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>

#include "cyclesim/errors.hpp"
#include "cyclesim/oracles.hpp"
#include "cyclesim/pattern.hpp"
#include "cyclesim/rng.hpp"
#include "congest_common.hpp"

namespace cyclesim {

std::vector<std::uint64_t> token_caps(std::uint32_t k) {
  switch (k) {
    case 2: return {1};
    case 3: return {3, 3};
    case 4: return {5, 30, 36};
    case 5: return {101, 10201, 113322, 568120};
    default: throw ConfigError("k must be in [2, 5]");
  }
}

std::uint64_t int_root(std::uint64_t n, std::uint32_t e) {
  if (e == 0) throw ConfigError("int_root: exponent 0");
  auto fits = [&](std::uint64_t d) {
    __uint128_t acc = 1;
    for (std::uint32_t i = 0; i < e; ++i) {
      acc *= d;
      if (acc > n) return false;
    }
    return true;
  };
  auto d = static_cast<std::uint64_t>(std::pow(static_cast<double>(n), 1.0 / e));
  while (d > 0 && !fits(d)) --d;
  while (fits(d + 1)) ++d;
  return d;
}

std::uint64_t default_light_trials(std::uint32_t k) {
  token_caps(k);
  std::uint64_t r = 3;
  for (std::uint32_t i = 0; i < 2 * k; ++i) r *= 2 * k;
  return r;
}

std::uint64_t default_heavy_iterations(std::size_t n, std::uint32_t k) {
  token_caps(k);
  return static_cast<std::uint64_t>(std::ceil(4.0 * std::pow(static_cast<double>(n), 1.0 - 1.0 / k)));
}

std::uint64_t priority_of(std::uint64_t iter_key, Vertex v, std::size_t n) {
  auto nn = static_cast<std::uint64_t>(n);
  return 1 + bounded_from(stream_at(derive(iter_key, "prio"), v), nn * nn * nn);
}

namespace {

using detail::back_trace;
using detail::PredMap;
using detail::run_programs;

std::uint32_t level_of(std::uint32_t c, std::uint32_t k) { return c <= k ? c : 2 * k - c; }
std::uint32_t next_color(std::uint32_t c, std::uint32_t k) { return c < k ? c + 1 : c - 1; }

// start[i] is the first round of BFS step i (1..k); start[k+1] is the end of the trial.
struct Schedule {
  std::vector<std::uint64_t> start;
  std::uint64_t end() const { return start.back(); }
};

Schedule make_schedule(const std::vector<std::uint64_t>& dur) {  // dur[i-1] = length of step i
  Schedule s;
  s.start = {0, 1};
  for (auto d : dur) s.start.push_back(s.start.back() + d);
  return s;
}

std::vector<std::uint64_t> light_caps(std::size_t n, std::uint32_t k) {  // index i: bound for level i
  std::uint64_t d = std::max<std::uint64_t>(1, int_root(n, k));
  std::vector<std::uint64_t> cap(k, 1);
  for (std::uint32_t i = 1; i < k; ++i) cap[i] = cap[i - 1] * d;
  return cap;
}

Schedule light_schedule(std::size_t n, std::uint32_t k) {
  auto cap = light_caps(n, k);
  std::vector<std::uint64_t> dur{1};
  for (std::uint32_t i = 1; i < k; ++i) dur.push_back(cap[i]);
  return make_schedule(dur);
}

std::vector<std::uint64_t> ns_caps(std::uint32_t k) {
  auto t = token_caps(k);
  t.insert(t.begin(), 1);
  return t;
}

Schedule ns_schedule(std::uint32_t k) {
  auto t = token_caps(k);
  std::vector<std::uint64_t> dur{1};
  dur.insert(dur.end(), t.begin(), t.end());
  return make_schedule(dur);
}

std::uint64_t self_rounds(std::uint32_t k) { return 2 * k + 1; }

std::vector<char> light_mask(const Graph& g, std::uint32_t k) {
  auto cap = int_root(g.n(), k);
  std::vector<char> a(g.n());
  for (Vertex v = 0; v < g.n(); ++v) a[v] = g.degree(v) <= cap;
  return a;
}

struct Hit {
  Vertex detector, origin, up, down;
  auto operator<=>(const Hit&) const = default;
};

struct BfsResult {
  PredMap pred;
  std::vector<Hit> hits;
};

std::optional<CycleWitness> assemble(BfsResult r) {
  if (r.hits.empty()) return std::nullopt;
  auto h = *std::min_element(r.hits.begin(), r.hits.end());
  auto up = back_trace(r.pred, h.up, h.origin);
  auto down = back_trace(r.pred, h.down, h.origin);
  CycleWitness w;
  w.vertices.push_back(h.origin);
  w.vertices.insert(w.vertices.end(), up.rbegin(), up.rend());
  w.vertices.push_back(h.detector);
  w.vertices.insert(w.vertices.end(), down.begin(), down.end());
  return w;
}

// ---- engine programs ----

struct BfsSetup {
  std::uint32_t k = 0;
  std::uint64_t key = 0;
  std::vector<char> active;      // sends and receives tokens; neighbors know this flag
  std::vector<char> originates;  // starts a token when colored 0
  bool exchange_all = false;     // colors go over every edge, not only active pairs
  Schedule sched;
  std::vector<std::uint64_t> cap;  // index i: token bound at level i
  bool over_cap_silences = false;  // otherwise exceeding the bound is a fault
};

class ColorBfsNode : public NodeProgram {
 public:
  ColorBfsNode(const BfsSetup& s, BfsResult& out) : s_(s), out_(out) {}

  void step(NodeContext& ctx) override {
    const Vertex v = ctx.id();
    const auto r = ctx.round();
    const std::uint32_t k = s_.k, colors = 2 * k;
    if (r == 0) {
      color_ = trial_color(s_.key, v, colors);
      if (s_.exchange_all || s_.active[v])
        for (Vertex u : ctx.neighbors())
          if (s_.exchange_all || s_.active[u]) ctx.send(u, Word{color_});
      ctx.sleep_until(1);
      return;
    }
    if (r == 1) {
      for (const auto& in : ctx.inbox()) nbr_[in.from] = static_cast<std::uint32_t>(in.word[0]);
      if (!s_.active[v]) {
        ctx.sleep_until(s_.sched.end());
        return;
      }
      if (color_ == 0) {
        if (s_.originates[v])
          for (auto [u, c] : nbr_)
            if (s_.active[u] && (c == 1 || c == colors - 1)) ctx.send(u, Word{v});
        ctx.sleep_until(s_.sched.end());
        return;
      }
      auto lv = level_of(color_, k);
      ctx.sleep_until(lv == k ? s_.sched.end() : s_.sched.start[lv + 1]);
      return;
    }
    if (r == s_.sched.end()) {
      if (s_.active[v] && color_ == k) detect(ctx);
      ctx.halt();
      return;
    }
    forward(ctx);
    ctx.sleep_until(s_.sched.end());
  }

 private:
  void forward(NodeContext& ctx) {
    const Vertex v = ctx.id();
    std::map<Vertex, Vertex> got;
    for (const auto& in : ctx.inbox()) {
      auto [it, fresh] = got.try_emplace(static_cast<Vertex>(in.word[0]), in.from);
      if (!fresh) it->second = std::min(it->second, in.from);
    }
    if (got.empty()) return;
    out_.pred[v] = got;
    auto lv = level_of(color_, s_.k);
    if (got.size() > s_.cap[lv]) {
      if (!s_.over_cap_silences) fault("BFS: level token count above its bound");
      return;
    }
    auto nc = next_color(color_, s_.k);
    for (auto [u, c] : nbr_)
      if (s_.active[u] && c == nc)
        for (const auto& entry : got) ctx.send(u, Word{entry.first});
  }

  void detect(NodeContext& ctx) {
    std::map<Vertex, Vertex> up, down;
    for (const auto& in : ctx.inbox()) {
      auto c = nbr_.at(in.from);
      auto& side = c == s_.k - 1 ? up : down;
      auto [it, fresh] = side.try_emplace(static_cast<Vertex>(in.word[0]), in.from);
      if (!fresh) it->second = std::min(it->second, in.from);
    }
    for (auto [o, pu] : up)
      if (auto it = down.find(o); it != down.end()) out_.hits.push_back({ctx.id(), o, pu, it->second});
  }

  const BfsSetup& s_;
  BfsResult& out_;
  std::uint32_t color_ = 0;
  std::map<Vertex, std::uint32_t> nbr_;
};

TrialOutcome engine_color_bfs(const Graph& g, const BfsSetup& s) {
  BfsResult out;
  std::vector<std::unique_ptr<NodeProgram>> progs;
  for (Vertex v = 0; v < g.n(); ++v) progs.push_back(std::make_unique<ColorBfsNode>(s, out));
  TrialOutcome t;
  t.rounds = run_programs(g, progs, s.sched.end());
  if (t.rounds != s.sched.end()) fault("CONGEST trial ended off schedule");
  t.witness = assemble(std::move(out));
  return t;
}

class SelfBfsNode : public NodeProgram {
 public:
  SelfBfsNode(std::uint32_t k, std::uint64_t key, const std::vector<char>& source, PredMap& pred,
              std::vector<std::pair<Vertex, Vertex>>& hits)
      : k_(k), key_(key), source_(source), pred_(pred), hits_(hits) {}

  void step(NodeContext& ctx) override {
    const Vertex v = ctx.id();
    const auto r = ctx.round();
    const std::uint32_t colors = 2 * k_;
    const std::uint64_t end = self_rounds(k_);
    if (r == 0) {
      color_ = trial_color(key_, v, colors);
      ctx.send_all(Word{color_});
      ctx.sleep_until(1);
      return;
    }
    if (r == 1) {
      for (const auto& in : ctx.inbox()) nbr_[in.from] = static_cast<std::uint32_t>(in.word[0]);
      if (source_[v]) send_next(ctx, v);
      ctx.sleep_until(end, true);
      return;
    }
    std::map<Vertex, Vertex> got;
    for (const auto& in : ctx.inbox()) {
      auto [it, fresh] = got.try_emplace(static_cast<Vertex>(in.word[0]), in.from);
      if (!fresh) it->second = std::min(it->second, in.from);
    }
    for (auto [o, p] : got) {
      if (o == v) {
        hits_.push_back({v, p});
      } else if (r < end && !pred_[v].contains(o)) {
        pred_[v][o] = p;
        send_next(ctx, o);
      }
    }
    if (r == end) {
      ctx.halt();
      return;
    }
    ctx.sleep_until(end, true);
  }

 private:
  void send_next(NodeContext& ctx, Vertex origin) {
    auto nc = (color_ + 1) % (2 * k_);
    for (auto [u, c] : nbr_)
      if (c == nc) ctx.send(u, Word{origin});
  }

  std::uint32_t k_;
  std::uint64_t key_;
  const std::vector<char>& source_;
  PredMap& pred_;
  std::vector<std::pair<Vertex, Vertex>>& hits_;
  std::uint32_t color_ = 0;
  std::map<Vertex, std::uint32_t> nbr_;
};

CycleWitness self_witness(const PredMap& pred, Vertex s, Vertex last) {
  auto seq = back_trace(pred, last, s);
  CycleWitness w;
  w.vertices.push_back(s);
  w.vertices.insert(w.vertices.end(), seq.rbegin(), seq.rend());
  return w;
}

class PriorityNode : public NodeProgram {
 public:
  PriorityNode(std::uint64_t iter_key, std::uint64_t horizon, std::vector<char>& is_source)
      : key_(iter_key), h_(horizon), out_(is_source) {}

  void step(NodeContext& ctx) override {
    const auto r = ctx.round();
    if (r == 0) {
      own_ = min_ = priority_of(key_, ctx.id(), ctx.n());
      ctx.send_all(Word{static_cast<std::int64_t>(min_)});
      ctx.sleep_until(h_, true);
      return;
    }
    if (r <= h_) {
      bool changed = false;
      for (const auto& in : ctx.inbox())
        if (in.word[0] > 0 && static_cast<std::uint64_t>(in.word[0]) < min_) {
          min_ = static_cast<std::uint64_t>(in.word[0]);
          changed = true;
        }
      if (r < h_) {
        if (changed) ctx.send_all(Word{static_cast<std::int64_t>(min_)});
        ctx.sleep_until(h_, true);
        return;
      }
      if (min_ == own_) {
        out_[ctx.id()] = 1;
        ctx.send_all(Word{-1});
      }
      ctx.sleep_until(h_ + 1);
      return;
    }
    ctx.halt();
  }

 private:
  std::uint64_t key_, h_;
  std::vector<char>& out_;
  std::uint64_t own_ = 0, min_ = 0;
};

// ---- kernels ----

class ColorCache {
 public:
  ColorCache(std::size_t n, std::uint32_t colors) : val_(n), stamp_(n, 0), colors_(colors) {}
  void reset(std::uint64_t key) {
    key_ = key;
    ++cur_;
  }
  std::uint32_t operator()(Vertex v) {
    if (stamp_[v] != cur_) {
      stamp_[v] = cur_;
      val_[v] = trial_color(key_, v, colors_);
    }
    return val_[v];
  }

 private:
  std::vector<std::uint32_t> val_;
  std::vector<std::uint64_t> stamp_;
  std::uint32_t colors_;
  std::uint64_t key_ = 0, cur_ = 0;
};

using AdjList = std::vector<std::vector<Vertex>>;

BfsResult kernel_color_bfs(const AdjList& adj, std::span<const Vertex> candidates, std::uint32_t k,
                           ColorCache& col, const std::vector<std::uint64_t>& cap, bool over_cap_silences) {
  using Layer = std::map<Vertex, std::map<Vertex, Vertex>>;
  const std::uint32_t colors = 2 * k;
  BfsResult res;
  Layer cur, up_k, down_k;
  for (Vertex o : candidates) {
    if (col(o) != 0) continue;
    for (Vertex u : adj[o]) {
      auto c = col(u);
      if (c == 1 || c == colors - 1) cur[u].try_emplace(o, o);
    }
  }
  for (std::uint32_t i = 1; i < k && !cur.empty(); ++i) {
    Layer next;
    for (auto& [x, got] : cur) {
      res.pred[x] = got;
      if (got.size() > cap[i]) {
        if (!over_cap_silences) fault("BFS: level token count above its bound");
        continue;
      }
      auto cx = col(x);
      auto nc = next_color(cx, k);
      Layer& dst = i + 1 == k ? (cx < k ? up_k : down_k) : next;
      for (Vertex u : adj[x]) {
        if (col(u) != nc) continue;
        auto& m = dst[u];
        for (const auto& entry : got) {
          auto [it, fresh] = m.try_emplace(entry.first, x);
          if (!fresh) it->second = std::min(it->second, x);
        }
      }
    }
    cur = std::move(next);
  }
  for (auto& [d, um] : up_k) {
    auto dit = down_k.find(d);
    if (dit == down_k.end()) continue;
    for (auto [o, pu] : um)
      if (auto it = dit->second.find(o); it != dit->second.end()) res.hits.push_back({d, o, pu, it->second});
  }
  return res;
}

// C_{2k} copies inside `sub`, as vertex sets; nullopt when too many to list.
std::optional<std::vector<std::vector<Vertex>>> cycle_sets(const Graph& sub, std::uint32_t k) {
  constexpr std::size_t kLimit = 20000;
  auto inst = enumerate_subgraph(sub, SubgraphPattern::cycle(2 * k), kLimit);
  if (inst.size() >= kLimit) return std::nullopt;
  std::vector<std::vector<Vertex>> out;
  for (auto& i : inst) out.push_back(i.vertices);
  return out;
}

Graph restrict(const Graph& g, const std::vector<char>& keep) {
  std::vector<Edge> es;
  for (auto e : g.edges())
    if (keep[e.first] && keep[e.second]) es.push_back(e);
  return Graph::from_edges(g.n(), es);
}

AdjList adj_of(const Graph& g) {
  AdjList a(g.n());
  for (Vertex v = 0; v < g.n(); ++v) a[v].assign(g.adj(v).begin(), g.adj(v).end());
  return a;
}

// A vertex h with the neighbors that matter to it. A properly colored cycle through h
// gives h one neighbor colored c(h)+1 and another colored c(h)-1.
struct Anchor {
  Vertex h;
  std::vector<Vertex> nbrs;
};

inline std::uint32_t fast_color(std::uint64_t key, Vertex v, std::uint32_t colors) {
  auto h = stream_at(key, v);
  auto prod = static_cast<__uint128_t>(h) * colors;
  if (static_cast<std::uint64_t>(prod) < colors) return trial_color(key, v, colors);
  return static_cast<std::uint32_t>(prod >> 64);
}

// Yields, in order, the trials t in [from, to) whose key stream_at(root, t) lets some anchor
// see both color neighbors. Trials it skips cannot detect anything.
class CandidateScan {
 public:
  CandidateScan(std::uint64_t root, std::uint64_t to, const std::vector<Anchor>& anchors, std::uint32_t colors)
      : root_(root), to_(to), anchors_(anchors), colors_(colors) {}

  // Next candidate, or `to` when exhausted.
  std::uint64_t next() {
    for (;;) {
      while (pos_ < len_)
        if (pass_[pos_++]) return base_ + pos_ - 1;
      base_ += len_;
      if (base_ >= to_ || anchors_.empty()) return to_;
      fill();
    }
  }

 private:
  static constexpr std::size_t kBlock = 512;

  void fill() {
    len_ = static_cast<std::size_t>(std::min<std::uint64_t>(kBlock, to_ - base_));
    pos_ = 0;
    for (std::size_t i = 0; i < len_; ++i) key_[i] = stream_at(root_, base_ + i);
    std::fill_n(pass_.begin(), len_, 0);
    for (const auto& a : anchors_) {
      for (std::size_t i = 0; i < len_; ++i) {
        ch_[i] = fast_color(key_[i], a.h, colors_);
        up_[i] = down_[i] = 0;
      }
      for (Vertex u : a.nbrs)
        for (std::size_t i = 0; i < len_; ++i) {
          auto cu = fast_color(key_[i], u, colors_);
          up_[i] |= cu == (ch_[i] + 1) % colors_;
          down_[i] |= cu == (ch_[i] + colors_ - 1) % colors_;
        }
      for (std::size_t i = 0; i < len_; ++i) pass_[i] |= up_[i] & down_[i];
    }
  }

  std::uint64_t root_, to_;
  const std::vector<Anchor>& anchors_;
  std::uint32_t colors_;
  std::uint64_t base_ = 0;
  std::size_t len_ = 0, pos_ = 0;
  std::array<std::uint64_t, kBlock> key_{};
  std::array<std::uint32_t, kBlock> ch_{};
  std::array<std::uint8_t, kBlock> up_{}, down_{}, pass_{};
};

// True if some anchor h returns to itself along a walk colored c(h), c(h)+1, ..., c(h)+2k.
// Every properly colored C_{2k} through h gives such a walk.
class WalkFilter {
 public:
  WalkFilter(std::size_t n, std::uint32_t colors) : stamp_(n, 0), colors_(colors) {}

  bool operator()(const AdjList& adj, const std::vector<Anchor>& anchors, ColorCache& col) {
    for (const auto& a : anchors)
      if (returns(adj, a.h, col)) return true;
    return false;
  }

  bool returns(const AdjList& adj, Vertex h, ColorCache& col) {
    auto ch = col(h);
    cur_.assign(1, h);
    for (std::uint32_t step = 1; step <= colors_ && !cur_.empty(); ++step) {
      const auto want = (ch + step) % colors_;
      ++epoch_;
      next_.clear();
      for (Vertex x : cur_)
        for (Vertex u : adj[x]) {
          if (stamp_[u] == epoch_ || col(u) != want) continue;
          if (step == colors_) {
            if (u == h) return true;
            continue;
          }
          if (u == h) continue;
          stamp_[u] = epoch_;
          next_.push_back(u);
        }
      cur_.swap(next_);
    }
    return false;
  }

 private:
  std::vector<std::uint64_t> stamp_;
  std::uint64_t epoch_ = 0;
  std::uint32_t colors_;
  std::vector<Vertex> cur_, next_;
};

// Light trials restricted to the 2-core of the light subgraph: a detected cycle and every
// relay on its token paths lie there, so outcomes and smallest-sender preds are unchanged.
struct LightKernel {
  std::uint32_t k;
  AdjList adj;
  std::vector<Vertex> nodes;
  std::vector<Vertex> hitting;  // meets every C_{2k} of the core
  std::vector<Anchor> anchors;
  std::vector<std::uint64_t> cap;
  ColorCache col;
  WalkFilter walk;

  LightKernel(const Graph& g, std::uint32_t k_)
      : k(k_), cap(light_caps(g.n(), k_)), col(g.n(), 2 * k_), walk(g.n(), 2 * k_) {
    auto core = prune_degenerate(restrict(g, light_mask(g, k)));
    adj = adj_of(core);
    for (Vertex v = 0; v < g.n(); ++v)
      if (core.degree(v) > 0) nodes.push_back(v);
    auto sets = cycle_sets(core, k);
    if (sets)
      cover(*sets);
    else
      hitting = nodes;
    for (Vertex h : hitting) anchors.push_back({h, adj[h]});
  }

  // Greedy cover: repeatedly take the vertex on the most uncovered cycles.
  void cover(const std::vector<std::vector<Vertex>>& sets) {
    std::vector<char> covered(sets.size(), 0);
    std::size_t left = sets.size();
    while (left > 0) {
      std::map<Vertex, std::size_t> count;
      for (std::size_t i = 0; i < sets.size(); ++i)
        if (!covered[i])
          for (Vertex v : sets[i]) ++count[v];
      auto best = std::max_element(count.begin(), count.end(),
                                   [](auto& a, auto& b) { return a.second < b.second; })->first;
      hitting.push_back(best);
      for (std::size_t i = 0; i < sets.size(); ++i)
        if (!covered[i] && std::binary_search(sets[i].begin(), sets[i].end(), best)) {
          covered[i] = 1;
          --left;
        }
    }
  }

  std::optional<CycleWitness> trial(std::uint64_t key) {
    col.reset(key);
    if (!walk(adj, anchors, col)) return std::nullopt;
    return assemble(kernel_color_bfs(adj, nodes, k, col, cap, false));
  }
};

struct SelfKernel {
  std::uint32_t k;
  AdjList adj;
  std::vector<char> on_cycle;  // lies on some C_{2k}; all ones when listing was cut off
  ColorCache col;
  WalkFilter walk;

  SelfKernel(const Graph& g, std::uint32_t k_)
      : k(k_), on_cycle(g.n(), 0), col(g.n(), 2 * k_), walk(g.n(), 2 * k_) {
    auto core = prune_degenerate(g);
    adj = adj_of(core);
    auto sets = cycle_sets(core, k);
    if (!sets) {
      for (Vertex v = 0; v < g.n(); ++v) on_cycle[v] = core.degree(v) > 0;
      return;
    }
    for (auto& s : *sets)
      for (Vertex v : s) on_cycle[v] = 1;
  }

  std::vector<Anchor> anchors(std::span<const Vertex> sources) const {
    std::vector<Anchor> a;
    for (Vertex s : sources)
      if (on_cycle[s]) a.push_back({s, adj[s]});
    return a;
  }

  std::optional<CycleWitness> trial(std::span<const Vertex> sources, std::uint64_t key) {
    col.reset(key);
    const std::uint32_t colors = 2 * k;
    for (Vertex s : sources) {
      if (!on_cycle[s] || !walk.returns(adj, s, col)) continue;
      auto cs = col(s);
      PredMap pred;
      std::map<Vertex, Vertex> cur{{s, s}};
      for (std::uint32_t hop = 1; hop <= colors && !cur.empty(); ++hop) {
        std::map<Vertex, Vertex> next;
        auto want = (cs + hop) % colors;
        for (auto [x, p] : cur) {
          if (x != s) pred[x][s] = p;
          for (Vertex u : adj[x]) {
            if (col(u) != want || (u == s && hop < colors)) continue;
            auto [it, fresh] = next.try_emplace(u, x);
            if (!fresh) it->second = std::min(it->second, x);
          }
        }
        cur = std::move(next);
      }
      if (auto it = cur.find(s); it != cur.end()) return self_witness(pred, s, it->second);
    }
    return std::nullopt;
  }
};

std::vector<Vertex> kernel_sample(const Graph& g, std::uint64_t iter_key, std::uint64_t horizon, SampleMode mode) {
  const std::size_t n = g.n();
  std::vector<std::uint64_t> p(n);
  for (Vertex v = 0; v < n; ++v) p[v] = priority_of(iter_key, v, n);
  if (mode == SampleMode::God) {
    if (n == 0) return {};
    return {static_cast<Vertex>(std::min_element(p.begin(), p.end()) - p.begin())};
  }
  std::vector<Vertex> out;
  for (Vertex v = 0; v < n; ++v) {
    auto dist = bfs_distances(g, v);
    bool least = true;
    for (Vertex u = 0; u < n && least; ++u)
      if (dist[u] != kUnreached && dist[u] <= horizon && p[u] < p[v]) least = false;
    if (least) out.push_back(v);
  }
  return out;
}

BfsSetup ns_setup(const Graph& g, std::uint32_t k, std::span<const Vertex> sources, std::uint64_t key) {
  BfsSetup s;
  s.k = k;
  s.key = key;
  s.active.assign(g.n(), 1);
  s.originates.assign(g.n(), 0);
  for (Vertex v : sources) s.active[v] = 0;
  for (Vertex v : sources)
    for (Vertex u : g.adj(v))
      if (s.active[u]) s.originates[u] = 1;
  s.exchange_all = true;
  s.sched = ns_schedule(k);
  s.cap = ns_caps(k);
  s.over_cap_silences = true;
  return s;
}

void check_k(std::uint32_t k) { token_caps(k); }

void check_witness(const Graph& g, const std::optional<CycleWitness>& w, std::uint32_t k, const char* who) {
  if (w && !validate_witness(g, *w, 2 * k)) fault(std::string(who) + ": reported an invalid cycle");
}

struct HeavyBudget {
  std::uint64_t iters, self_trials, horizon, rounds;
};

HeavyBudget heavy_budget(std::size_t n, std::uint32_t k, const DetectOptions& opt) {
  check_k(k);
  HeavyBudget b{};
  b.iters = opt.heavy_iterations ? opt.heavy_iterations : default_heavy_iterations(n, k);
  b.self_trials = opt.self_trials ? opt.self_trials : default_light_trials(k);
  b.horizon = opt.horizon ? *opt.horizon : 2 * b.self_trials * b.iters;
  const std::uint64_t sample_rounds = opt.mode == SampleMode::God ? 0 : b.horizon + 1;
  b.rounds = b.iters * (sample_rounds + b.self_trials * self_rounds(k) + ns_schedule(k).end());
  return b;
}

}  // namespace

TrialOutcome light_trial(const Graph& g, std::uint32_t k, std::uint64_t trial_key, Backend b) {
  check_k(k);
  if (b == Backend::Engine) {
    BfsSetup s;
    s.k = k;
    s.key = trial_key;
    s.active = light_mask(g, k);
    s.originates = s.active;
    s.sched = light_schedule(g.n(), k);
    s.cap = light_caps(g.n(), k);
    return engine_color_bfs(g, s);
  }
  LightKernel lk(g, k);
  return {lk.trial(trial_key), light_schedule(g.n(), k).end()};
}

TrialOutcome self_bfs_trial(const Graph& g, std::uint32_t k, std::span<const Vertex> sources, std::uint64_t key,
                            Backend b) {
  check_k(k);
  if (b == Backend::Engine) {
    std::vector<char> is_source(g.n(), 0);
    for (Vertex s : sources) is_source[s] = 1;
    PredMap pred;
    std::vector<std::pair<Vertex, Vertex>> hits;
    std::vector<std::unique_ptr<NodeProgram>> progs;
    for (Vertex v = 0; v < g.n(); ++v) progs.push_back(std::make_unique<SelfBfsNode>(k, key, is_source, pred, hits));
    TrialOutcome t;
    t.rounds = run_programs(g, progs, self_rounds(k));
    if (!hits.empty()) {
      auto [s, last] = *std::min_element(hits.begin(), hits.end());
      t.witness = self_witness(pred, s, last);
    }
    return t;
  }
  SelfKernel sk(g, k);
  std::vector<Vertex> sorted(sources.begin(), sources.end());
  std::sort(sorted.begin(), sorted.end());
  return {sk.trial(sorted, key), self_rounds(k)};
}

TrialOutcome ns_bfs_trial(const Graph& g, std::uint32_t k, std::span<const Vertex> sources, std::uint64_t key,
                          Backend b) {
  check_k(k);
  auto s = ns_setup(g, k, sources, key);
  if (b == Backend::Engine) return engine_color_bfs(g, s);
  AdjList adj(g.n());
  std::vector<Vertex> cands;
  for (Vertex v = 0; v < g.n(); ++v) {
    if (!s.active[v]) continue;
    if (s.originates[v]) cands.push_back(v);
    for (Vertex u : g.adj(v))
      if (s.active[u]) adj[v].push_back(u);
  }
  ColorCache col(g.n(), 2 * k);
  col.reset(key);
  return {assemble(kernel_color_bfs(adj, cands, k, col, s.cap, true)), s.sched.end()};
}

SampleOutcome sample_sources(const Graph& g, std::uint64_t iter_key, std::uint64_t horizon, SampleMode mode,
                             Backend b) {
  if (mode == SampleMode::Priority && horizon == 0) throw ConfigError("priority sampling needs a positive horizon");
  SampleOutcome out;
  if (mode == SampleMode::God || b == Backend::Kernel) {
    out.sources = kernel_sample(g, iter_key, horizon, mode);
    out.rounds = mode == SampleMode::God ? 0 : horizon + 1;
    return out;
  }
  std::vector<char> is_source(g.n(), 0);
  std::vector<std::unique_ptr<NodeProgram>> progs;
  for (Vertex v = 0; v < g.n(); ++v) progs.push_back(std::make_unique<PriorityNode>(iter_key, horizon, is_source));
  out.rounds = run_programs(g, progs, horizon + 1);
  for (Vertex v = 0; v < g.n(); ++v)
    if (is_source[v]) out.sources.push_back(v);
  return out;
}

DetectReport detect_light_c2k(const Graph& g, std::uint32_t k, std::uint64_t seed, const DetectOptions& opt) {
  check_k(k);
  const std::uint64_t trials = opt.light_trials ? opt.light_trials : default_light_trials(k);
  const std::uint64_t root = derive(seed, "light");
  DetectReport rep;
  rep.rounds = 1 + trials * light_schedule(g.n(), k).end();  // degree exchange, then the trials
  if (opt.backend == Backend::Engine) {
    for (std::uint64_t t = 0; t < trials; ++t) {
      auto w = light_trial(g, k, stream_at(root, t), Backend::Engine).witness;
      rep.trials_simulated = t + 1;
      if (w) {
        check_witness(g, w, k, "light detector");
        rep.witness = std::move(w);
        rep.stage = "light";
        rep.index = t;
        return rep;
      }
    }
    return rep;
  }
  LightKernel lk(g, k);
  CandidateScan scan(root, trials, lk.anchors, 2 * k);
  for (auto t = scan.next(); t < trials; t = scan.next()) {
    if (auto w = lk.trial(stream_at(root, t))) {
      check_witness(g, w, k, "light detector");
      rep.witness = std::move(w);
      rep.stage = "light";
      rep.index = t;
      rep.trials_simulated = t + 1;
      return rep;
    }
  }
  rep.trials_simulated = trials;
  return rep;
}

DetectReport detect_heavy_c2k(const Graph& g, std::uint32_t k, std::uint64_t seed, const DetectOptions& opt) {
  const auto [iters, self_trials, horizon, rounds] = heavy_budget(g.n(), k, opt);
  const std::uint64_t root = derive(seed, "heavy");
  DetectReport rep;
  rep.rounds = rounds;
  std::optional<SelfKernel> sk;
  if (opt.backend == Backend::Kernel) sk.emplace(g, k);
  for (std::uint64_t j = 0; j < iters; ++j) {
    const auto ik = derive(root, j);
    auto sources = sample_sources(g, ik, horizon, opt.mode, opt.backend).sources;
    const auto self_root = derive(ik, "self");
    auto found = [&](std::optional<CycleWitness> w, std::uint64_t b) {
      check_witness(g, w, k, "self BFS");
      rep.witness = std::move(w);
      rep.stage = "heavy-self";
      rep.index = j;
      rep.trials_simulated += b + 1;
    };
    if (sk) {
      auto anchors = sk->anchors(sources);
      CandidateScan scan(self_root, self_trials, anchors, 2 * k);
      bool hit = false;
      for (auto b = scan.next(); b < self_trials; b = scan.next()) {
        if (auto w = sk->trial(sources, stream_at(self_root, b))) {
          found(std::move(w), b);
          hit = true;
          break;
        }
      }
      if (hit) return rep;
    } else {
      for (std::uint64_t b = 0; b < self_trials; ++b)
        if (auto w = self_bfs_trial(g, k, sources, stream_at(self_root, b), Backend::Engine).witness) {
          found(std::move(w), b);
          return rep;
        }
    }
    rep.trials_simulated += self_trials;
    auto w = ns_bfs_trial(g, k, sources, derive(ik, "ns"), opt.backend).witness;
    ++rep.trials_simulated;
    if (w) {
      check_witness(g, w, k, "neighbor BFS");
      rep.witness = std::move(w);
      rep.stage = "heavy-ns";
      rep.index = j;
      return rep;
    }
  }
  return rep;
}

DetectReport detect_c2k_congest(const Graph& g, std::uint32_t k, std::uint64_t seed, const DetectOptions& opt) {
  auto light = detect_light_c2k(g, k, seed, opt);
  // Nodes cannot stop early, so both schedules always run in full.
  const auto heavy_rounds = heavy_budget(g.n(), k, opt).rounds;
  if (light.witness) {
    light.rounds += heavy_rounds;
    return light;
  }
  auto heavy = detect_heavy_c2k(g, k, seed, opt);
  heavy.rounds += light.rounds;
  heavy.trials_simulated += light.trials_simulated;
  return heavy;
}

}  // namespace cyclesim
