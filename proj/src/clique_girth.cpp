#include "cyclesim/clique_girth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>

#include "cyclesim/errors.hpp"
#include "cyclesim/oracles.hpp"
#include "cyclesim/turan.hpp"
#include "local_view.hpp"

namespace cyclesim {

using detail::LocalView;

GirthEstimate GirthEstimate::exact(CycleWitness w) {
  auto len = static_cast<std::uint32_t>(w.length());
  return {Kind::Exact, len, std::move(w)};
}

bool GirthEstimate::consistent_with(const Girth& g) const {
  switch (kind) {
    case Kind::Exact:
      return !g.is_infinite() && g.value() == value;
    case Kind::PlusOne:
      return !g.is_infinite() && (g.value() == value || g.value() == value + 1);
    case Kind::Acyclic:
      return g.is_infinite();
  }
  return false;
}

std::string GirthEstimate::str() const {
  switch (kind) {
    case Kind::Exact:
      return "Exact(" + std::to_string(value) + ")";
    case Kind::PlusOne:
      return "PlusOne(" + std::to_string(value) + ")";
    case Kind::Acyclic:
      return "Acyclic";
  }
  return "?";
}

namespace {

std::vector<Edge> incident_edges(const Graph& g, Vertex v) {
  std::vector<Edge> out;
  for (Vertex u : g.adj(v)) out.push_back(make_edge(u, v));
  std::sort(out.begin(), out.end());
  return out;
}

void merge_into(std::vector<Edge>& known, std::vector<Edge> more) {
  known.insert(known.end(), more.begin(), more.end());
  std::sort(known.begin(), known.end());
  known.erase(std::unique(known.begin(), known.end()), known.end());
}

GirthEstimate checked_exact(const Graph& g, CycleWitness w) {
  if (!validate_witness(g, w)) fault("reported cycle does not validate against the host graph");
  return GirthEstimate::exact(std::move(w));
}

// Minimum over broadcast cycle lengths; 0 means "none seen". Ties go to the smallest id.
std::optional<GirthEstimate> min_reported(Engine& e, const Graph& g, std::vector<std::optional<CycleWitness>>& seen) {
  std::vector<Word> vals;
  for (auto& c : seen) vals.push_back(Word{c ? static_cast<std::int64_t>(c->length()) : 0});
  auto all = e.broadcast_all(vals);
  std::optional<std::size_t> best;
  for (std::size_t v = 0; v < all.size(); ++v)
    if (all[v][0] > 0 && (!best || all[v][0] < all[*best][0])) best = v;
  if (!best) return std::nullopt;
  return checked_exact(g, *seen[*best]);
}

}  // namespace

Graph gather_all(Engine& e, const Graph& g, double load_factor) {
  const std::size_t n = g.n();
  std::vector<Message> msgs;
  msgs.reserve(g.m() * n);
  std::size_t input = 0;
  for (Vertex u = 0; u < n; ++u) {
    input = std::max(input, g.degree(u));
    for (Vertex w : g.adj(u))
      if (w > u)
        for (Vertex t = 0; t < n; ++t) msgs.push_back({u, t, Word{u, w}});
  }
  auto box = e.route(msgs, {load_factor, input});
  std::vector<Edge> edges;
  for (auto& in : box[0]) edges.emplace_back(static_cast<Vertex>(in.word[0]), static_cast<Vertex>(in.word[1]));
  Graph whole = Graph::from_edges(n, edges);
  if (!(whole == g)) fault("gather: reconstructed graph differs");
  return whole;
}

PreprocessOutcome preprocess(Engine& e, const Graph& g) {
  const std::size_t n = g.n();
  std::vector<Word> vals;
  for (Vertex v = 0; v < n; ++v) {
    std::int64_t x = 0, up = 0;
    for (Vertex u : g.adj(v)) {
      x ^= u;
      up += u > v;
    }
    vals.push_back(Word{static_cast<std::int64_t>(g.degree(v)), up, x});
  }
  auto all = e.broadcast_all(vals);
  std::uint64_t deg_sum = 0;
  for (auto& w : all) deg_sum += static_cast<std::uint64_t>(w[0]);
  const std::uint64_t m = deg_sum / 2;

  PreprocessOutcome out;
  if (m <= 8 * n) {
    Graph whole = gather_all(e, g, 8.0);
    auto w = shortest_cycle(whole);
    out.early = w ? checked_exact(g, *w) : GirthEstimate::acyclic();
    out.pruned = g;
    out.gathered = true;
    return out;
  }

  // Every node replays the same peeling from the broadcast (deg, xor) pairs.
  std::vector<std::int64_t> deg(n), xr(n);
  std::vector<char> gone(n, 0);
  std::vector<Vertex> stack;
  for (Vertex v = 0; v < n; ++v) {
    deg[v] = all[v][0];
    xr[v] = all[v][2];
    if (deg[v] < 2) stack.push_back(v);
  }
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    if (gone[v]) continue;
    gone[v] = 1;
    if (deg[v] == 1) {
      auto u = static_cast<Vertex>(xr[v]);
      xr[u] ^= v;
      if (--deg[u] < 2 && !gone[u]) stack.push_back(u);
    }
    deg[v] = 0;
  }
  std::vector<Edge> keep;
  for (auto e2 : g.edges())
    if (!gone[e2.first] && !gone[e2.second]) keep.push_back(e2);
  out.pruned = Graph::from_edges(n, keep);
  return out;
}

namespace {

std::vector<std::vector<std::uint32_t>> all_subsets(std::uint32_t s, std::uint32_t t, std::size_t cap) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> cur(t);
  for (std::uint32_t i = 0; i < t; ++i) cur[i] = i;
  for (;;) {
    out.push_back(cur);
    if (out.size() > cap) return out;
    std::int64_t i = static_cast<std::int64_t>(t) - 1;
    while (i >= 0 && cur[i] == s - t + i) --i;
    if (i < 0) return out;
    ++cur[i];
    for (auto j = static_cast<std::uint32_t>(i) + 1; j < t; ++j) cur[j] = cur[j - 1] + 1;
  }
}

}  // namespace

Phase1Outcome phase1_path_listing(Engine& e, const Graph& g, const Phase1Options& opt) {
  const std::size_t n = g.n();
  const std::size_t m = g.m();
  Phase1Outcome out;
  out.k = opt.k ? opt.k : girth_turan_k(n, m);
  out.state.known.resize(n);
  if (!out.k || *out.k <= 4 || m == 0) {
    out.shortcut = true;
    out.state.a = 1;
    for (Vertex v = 0; v < n; ++v) out.state.known[v] = incident_edges(g, v);
    return out;
  }
  const std::uint32_t k = *out.k;

  std::vector<Word> vals;
  for (Vertex v = 0; v < n; ++v) {
    std::int64_t up = 0;
    for (Vertex u : g.adj(v)) up += u > v;
    vals.push_back(Word{static_cast<std::int64_t>(g.degree(v)), up});
  }
  auto all = e.broadcast_all(vals);
  std::vector<std::uint64_t> prefix(n + 1, 0);
  for (Vertex v = 0; v < n; ++v) prefix[v + 1] = prefix[v] + static_cast<std::uint64_t>(all[v][1]);

  double raw = k * std::pow(static_cast<double>(n), 2.0 / k) / (20.0 * std::numbers::e);
  auto s = opt.segments.value_or(static_cast<std::uint32_t>(std::max(1.0, std::ceil(raw))));
  std::uint32_t t = std::min(k / 4, s);
  out.segments = s;
  out.subset_size = t;
  auto subsets = all_subsets(s, t, n);
  if (subsets.size() > n) fault("phase1: more segment subsets than nodes");
  std::vector<std::vector<Vertex>> holders(s);
  for (std::size_t i = 0; i < subsets.size(); ++i)
    for (auto sg : subsets[i]) holders[sg].push_back(static_cast<Vertex>(i));
  auto seg_of = [&](std::uint64_t idx) { return static_cast<std::uint32_t>(idx * s / m); };

  std::vector<Message> msgs;
  std::size_t input = 0;
  for (Vertex u = 0; u < n; ++u) {
    input = std::max(input, g.degree(u));
    std::uint64_t idx = prefix[u];
    for (Vertex w : g.adj(u)) {
      if (w < u) continue;
      for (Vertex h : holders[seg_of(idx)]) msgs.push_back({u, h, Word{u, w, static_cast<std::int64_t>(idx)}});
      ++idx;
    }
  }
  auto box = e.route(msgs, {opt.load_factor, input});

  struct Held {
    std::vector<Edge> edges;
    std::map<Edge, std::uint64_t> index;
  };
  std::vector<Held> held(n);
  std::vector<std::optional<CycleWitness>> seen(n);
  for (Vertex i = 0; i < n; ++i) {
    for (auto& in : box[i]) {
      Edge ed{static_cast<Vertex>(in.word[0]), static_cast<Vertex>(in.word[1])};
      held[i].edges.push_back(ed);
      held[i].index[ed] = static_cast<std::uint64_t>(in.word[2]);
    }
    std::sort(held[i].edges.begin(), held[i].edges.end());
    if (!held[i].edges.empty()) seen[i] = LocalView(held[i].edges).shortest_cycle();
  }
  auto best = min_reported(e, g, seen);
  if (best && (best->value <= t || s <= t)) {
    out.exact = best;
    return out;
  }

  const std::uint32_t r = opt.radius.value_or(t / 2);
  if (r > t && s > t) fault("phase1: radius beyond the covered path length");
  out.state.a = std::max<std::uint32_t>(r, 1);
  if (r <= 1) {
    for (Vertex v = 0; v < n; ++v) out.state.known[v] = incident_edges(g, v);
    return out;
  }

  // Step 2: owners of short paths report endpoints and distances to the path's start.
  std::vector<Message> reports;
  for (Vertex i = 0; i < subsets.size(); ++i) {
    if (held[i].edges.empty()) continue;
    LocalView view(held[i].edges);
    const Graph& lg = view.graph();
    std::map<std::pair<Vertex, Vertex>, std::uint32_t> best_len;
    std::vector<Vertex> path;
    std::vector<char> on(lg.n(), 0);
    std::vector<std::uint32_t> segs;
    auto owned = [&]() {
      segs.clear();
      for (std::size_t j = 0; j + 1 < path.size(); ++j) {
        Edge ge = make_edge(view.global_id(path[j]), view.global_id(path[j + 1]));
        segs.push_back(seg_of(held[i].index.at(ge)));
      }
      std::sort(segs.begin(), segs.end());
      segs.erase(std::unique(segs.begin(), segs.end()), segs.end());
      for (std::uint32_t x = 0; segs.size() < t; ++x)
        if (!std::binary_search(segs.begin(), segs.end(), x)) {
          segs.insert(std::lower_bound(segs.begin(), segs.end(), x), x);
        }
      return segs == subsets[i];
    };
    auto dfs = [&](auto&& self, Vertex x) -> void {
      if (path.size() > 1 && owned()) {
        auto key = std::make_pair(view.global_id(path.front()), view.global_id(x));
        auto len = static_cast<std::uint32_t>(path.size() - 1);
        auto it = best_len.find(key);
        if (it == best_len.end() || it->second > len) best_len[key] = len;
      }
      if (path.size() - 1 == r) return;
      for (Vertex y : lg.adj(x)) {
        if (on[y]) continue;
        on[y] = 1;
        path.push_back(y);
        self(self, y);
        path.pop_back();
        on[y] = 0;
      }
    };
    for (Vertex v = 0; v < lg.n(); ++v) {
      path.assign(1, v);
      on[v] = 1;
      dfs(dfs, v);
      on[v] = 0;
    }
    for (auto& [key, len] : best_len)
      reports.push_back({i, key.first, Word{key.second, static_cast<std::int64_t>(len)}});
  }
  auto rep = e.route(reports, {opt.load_factor, n});

  std::vector<Message> requests;
  for (Vertex v = 0; v < n; ++v) {
    std::map<Vertex, std::int64_t> dist;
    for (auto& in : rep[v]) {
      auto u = static_cast<Vertex>(in.word[0]);
      auto it = dist.find(u);
      if (it == dist.end() || it->second > in.word[1]) dist[u] = in.word[1];
    }
    for (auto [u, d] : dist)
      if (u != v && d <= static_cast<std::int64_t>(r) - 1) requests.push_back({v, u, Word{v}});
  }
  auto req = e.route(requests, {opt.load_factor, n});
  std::vector<Message> replies;
  for (Vertex u = 0; u < n; ++u)
    for (auto& in : req[u])
      for (Vertex w : g.adj(u)) replies.push_back({u, static_cast<Vertex>(in.word[0]), Word{u, w}});
  auto rep2 = e.route(replies, {opt.load_factor, g.max_degree()});
  for (Vertex v = 0; v < n; ++v) {
    auto known = incident_edges(g, v);
    for (auto& in : rep2[v])
      known.push_back(make_edge(static_cast<Vertex>(in.word[0]), static_cast<Vertex>(in.word[1])));
    merge_into(out.state.known[v], std::move(known));
  }
  return out;
}

std::optional<GirthEstimate> broadcast_cycle_check(Engine& e, const Graph& g, const NeighborhoodState& st) {
  std::vector<std::optional<CycleWitness>> seen(g.n());
  for (Vertex v = 0; v < g.n(); ++v)
    if (!st.known[v].empty()) seen[v] = LocalView(st.known[v]).shortest_cycle_through(v);
  return min_reported(e, g, seen);
}

namespace {

// u's view of N_a(u) as a tree rooted at u: per edge its level and the branch (child of u) holding it.
struct TreeView {
  std::vector<Vertex> front;                     // global ids at depth a
  std::vector<Vertex> front_branch;              // branch of each front node (global child id)
  std::vector<Edge> edges;                       // global, aligned with level/branch
  std::vector<std::uint32_t> level;              // e in N_j(u) iff level <= j
  std::vector<Vertex> branch;
  std::map<Vertex, std::vector<std::uint64_t>> per_branch;  // cumulative counts by level
  std::vector<std::uint64_t> total;

  std::uint64_t size_excluding(Vertex br, std::uint32_t j) const { return total[j] - per_branch.at(br)[j]; }
};

TreeView tree_view(const std::vector<Edge>& known, Vertex u, std::uint32_t a) {
  TreeView tv;
  tv.total.assign(a + 1, 0);
  if (known.empty()) return tv;
  LocalView view(known);
  const Graph& lg = view.graph();
  if (lg.m() + 1 != lg.n()) fault("phase2: known neighborhood is not a tree");
  Vertex root = view.local_id(u);
  auto dist = bfs_distances(lg, root);
  std::vector<Vertex> br(lg.n(), root);
  std::vector<Vertex> order(lg.n());
  for (Vertex x = 0; x < lg.n(); ++x) order[x] = x;
  std::sort(order.begin(), order.end(), [&](Vertex p, Vertex q) { return dist[p] < dist[q]; });
  for (Vertex x : order) {
    if (x == root) continue;
    for (Vertex y : lg.adj(x))
      if (dist[y] + 1 == dist[x]) br[x] = y == root ? x : br[y];
  }
  for (Vertex c : lg.adj(root)) tv.per_branch[view.global_id(c)].assign(a + 1, 0);
  for (auto [x, y] : lg.edges()) {
    Vertex deep = dist[x] > dist[y] ? x : y;
    auto lvl = std::min(dist[x], dist[y]) + 1;
    tv.edges.push_back(make_edge(view.global_id(x), view.global_id(y)));
    tv.level.push_back(lvl);
    tv.branch.push_back(view.global_id(br[deep]));
    if (lvl <= a) {
      tv.per_branch[view.global_id(br[deep])][lvl] += 1;
      tv.total[lvl] += 1;
    }
  }
  for (auto& [b, c] : tv.per_branch)
    for (std::uint32_t j = 1; j <= a; ++j) c[j] += c[j - 1];
  for (std::uint32_t j = 1; j <= a; ++j) tv.total[j] += tv.total[j - 1];
  for (Vertex x = 0; x < lg.n(); ++x)
    if (dist[x] == a) {
      tv.front.push_back(view.global_id(x));
      tv.front_branch.push_back(view.global_id(br[x]));
    }
  return tv;
}

}  // namespace

Phase2Outcome phase2_double(Engine& e, const Graph& g, NeighborhoodState& st) {
  const std::size_t n = g.n();
  const std::uint32_t a = st.a;
  const auto calls_before = e.metrics().primitive_calls;
  if (a == 0) fault("phase2: radius must be positive");

  std::vector<TreeView> tv(n);
  std::size_t input = 0;
  for (Vertex u = 0; u < n; ++u) {
    tv[u] = tree_view(st.known[u], u, a);
    input = std::max(input, st.known[u].size());
  }

  // Sizes |N_a(u) \ N_a(v)| to every front-line partner v.
  std::vector<Message> sizes;
  for (Vertex u = 0; u < n; ++u)
    for (std::size_t i = 0; i < tv[u].front.size(); ++i)
      sizes.push_back({u, tv[u].front[i],
                       Word{static_cast<std::int64_t>(tv[u].size_excluding(tv[u].front_branch[i], a))}});
  auto box = e.route(sizes, {1.0, input});
  std::vector<Word> sig;
  for (Vertex v = 0; v < n; ++v) {
    std::int64_t s = 0;
    for (auto& in : box[v]) s += in.word[0];
    sig.push_back(Word{s});
  }
  auto sigma = e.broadcast_all(sig);
  std::int64_t max_sigma = 0;
  for (auto& w : sigma) max_sigma = std::max(max_sigma, w[0]);

  auto ship = [&](std::uint32_t j) {
    std::vector<Message> msgs;
    for (Vertex u = 0; u < n; ++u)
      for (std::size_t i = 0; i < tv[u].front.size(); ++i)
        for (std::size_t x = 0; x < tv[u].edges.size(); ++x)
          if (tv[u].level[x] <= j && tv[u].branch[x] != tv[u].front_branch[i])
            msgs.push_back({u, tv[u].front[i], Word{tv[u].edges[x].first, tv[u].edges[x].second}});
    auto got = e.route(msgs, {1.0, input});
    for (Vertex v = 0; v < n; ++v) {
      std::vector<Edge> more;
      for (auto& in : got[v]) more.emplace_back(static_cast<Vertex>(in.word[0]), static_cast<Vertex>(in.word[1]));
      merge_into(st.known[v], std::move(more));
    }
  };

  Phase2Outcome out{};
  if (max_sigma <= static_cast<std::int64_t>(n) - 1) {
    ship(a);
    st.a = 2 * a;
    out.kind = Phase2Outcome::Kind::State1;
  } else {
    std::vector<Word> fs;
    for (Vertex v = 0; v < n; ++v) fs.push_back(Word{static_cast<std::int64_t>(tv[v].front.size())});
    auto fall = e.broadcast_all(fs);
    std::int64_t fmax = 1;
    for (auto& w : fall) fmax = std::max(fmax, w[0]);
    const auto d = static_cast<std::uint32_t>(static_cast<std::int64_t>(n) / fmax);
    const std::uint32_t cap = std::min(d, a);

    std::vector<Message> pre;
    for (Vertex u = 0; u < n; ++u)
      for (std::size_t i = 0; i < tv[u].front.size(); ++i)
        for (std::uint32_t j = 1; j <= cap; ++j)
          pre.push_back({u, tv[u].front[i],
                         Word{j, static_cast<std::int64_t>(tv[u].size_excluding(tv[u].front_branch[i], j))}});
    auto pbox = e.route(pre, {1.0, input});
    std::vector<Word> jv;
    for (Vertex v = 0; v < n; ++v) {
      std::vector<std::int64_t> sums(cap + 1, 0);
      for (auto& in : pbox[v]) sums[static_cast<std::size_t>(in.word[0])] += in.word[1];
      std::uint32_t best = 0;
      for (std::uint32_t j = 1; j <= cap && sums[j] < static_cast<std::int64_t>(n); ++j) best = j;
      jv.push_back(Word{best});
    }
    auto jall = e.broadcast_all(jv);
    std::uint32_t ip = cap;
    for (auto& w : jall) ip = std::min<std::uint32_t>(ip, static_cast<std::uint32_t>(w[0]));
    if (ip == a) fault("phase2: State 2 reached with every level-a sum below n");
    if (ip > 0) ship(ip);
    st.a = a + ip;
    out.kind = Phase2Outcome::Kind::State2;
  }
  out.b = st.a;
  if (auto ex = broadcast_cycle_check(e, g, st)) {
    out.kind = Phase2Outcome::Kind::Exact;
    out.exact = ex;
  }
  out.primitives = e.metrics().primitive_calls - calls_before;
  return out;
}

GirthApproxReport girth_plus_one(const Graph& g, std::uint64_t seed, EngineConfig cfg) {
  Engine e(Topology::clique(g), seed, cfg);
  GirthApproxReport rep;
  auto finish = [&](GirthEstimate est, std::string path) {
    rep.estimate = std::move(est);
    rep.path = std::move(path);
    rep.metrics = e.metrics();
    return rep;
  };

  auto pre = preprocess(e, g);
  if (pre.early) return finish(*pre.early, "gather");
  const Graph& h = pre.pruned;

  auto p1 = phase1_path_listing(e, h);
  if (p1.exact) return finish(*p1.exact, "phase1");
  NeighborhoodState st = std::move(p1.state);
  if (st.a >= 2)
    if (auto ex = broadcast_cycle_check(e, h, st)) return finish(*ex, "phase1");

  const auto cap = std::max<std::uint32_t>(1, static_cast<std::uint32_t>(std::bit_width(g.n())));
  for (std::uint32_t it = 0;; ++it) {
    if (it >= cap) fault("girth_plus_one: phase2 iteration cap exceeded");
    auto out = phase2_double(e, h, st);
    ++rep.phase2_calls;
    rep.max_phase2_primitives = std::max(rep.max_phase2_primitives, out.primitives);
    if (out.kind == Phase2Outcome::Kind::Exact)
      return finish(*out.exact, "phase2");
    if (out.kind == Phase2Outcome::Kind::State2) return finish(GirthEstimate::plus_one(2 * out.b + 1), "phase2-state2");
  }
}

}  // namespace cyclesim
