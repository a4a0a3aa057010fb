#include "cyclesim/oracles.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "cyclesim/errors.hpp"

namespace cyclesim {

std::vector<std::uint32_t> bfs_distances(const Graph& g, Vertex src) {
  std::vector<std::uint32_t> d(g.n(), kUnreached);
  std::vector<Vertex> q{src};
  d[src] = 0;
  for (std::size_t h = 0; h < q.size(); ++h)
    for (Vertex y : g.adj(q[h]))
      if (d[y] == kUnreached) {
        d[y] = d[q[h]] + 1;
        q.push_back(y);
      }
  return d;
}

Girth brute_girth(const Graph& g) {
  const std::size_t n = g.n();
  std::uint32_t best = kUnreached;
  std::vector<std::uint32_t> dist(n, kUnreached);
  std::vector<Vertex> parent(n), q;
  for (Vertex s = 0; s < n && best > 3; ++s) {
    q.assign(1, s);
    dist[s] = 0;
    parent[s] = s;
    for (std::size_t h = 0; h < q.size(); ++h) {
      Vertex x = q[h];
      if (2 * dist[x] + 1 >= best) break;
      for (Vertex y : g.adj(x)) {
        if (dist[y] == kUnreached) {
          dist[y] = dist[x] + 1;
          parent[y] = x;
          q.push_back(y);
        } else if (parent[x] != y) {
          best = std::min(best, dist[x] + dist[y] + 1);
        }
      }
    }
    for (Vertex v : q) dist[v] = kUnreached;
  }
  return best == kUnreached ? Girth::infinite() : Girth::of(best);
}

std::optional<CycleWitness> shortest_cycle_through(const Graph& g, Vertex v) {
  const std::size_t n = g.n();
  std::vector<std::uint32_t> dist(n, kUnreached);
  std::vector<Vertex> parent(n), branch(n), q{v};
  dist[v] = 0;
  std::uint32_t best = kUnreached;
  Edge best_edge{};
  for (std::size_t h = 0; h < q.size(); ++h) {
    Vertex x = q[h];
    if (2 * dist[x] + 1 >= best) break;
    for (Vertex y : g.adj(x)) {
      if (dist[y] == kUnreached) {
        dist[y] = dist[x] + 1;
        parent[y] = x;
        branch[y] = x == v ? y : branch[x];
        q.push_back(y);
      } else if (x != v && y != v && branch[x] != branch[y]) {
        std::uint32_t len = dist[x] + dist[y] + 1;
        if (len < best || (len == best && make_edge(x, y) < best_edge)) {
          best = len;
          best_edge = make_edge(x, y);
        }
      }
    }
  }
  if (best == kUnreached) return std::nullopt;
  CycleWitness w;
  for (Vertex x = best_edge.first; x != v; x = parent[x]) w.vertices.push_back(x);
  w.vertices.push_back(v);
  std::reverse(w.vertices.begin(), w.vertices.end());
  for (Vertex y = best_edge.second; y != v; y = parent[y]) w.vertices.push_back(y);
  return w;
}

std::optional<CycleWitness> shortest_cycle(const Graph& g) {
  std::optional<CycleWitness> best;
  for (Vertex v = 0; v < g.n(); ++v) {
    auto c = shortest_cycle_through(g, v);
    if (c && (!best || c->length() < best->length())) best = std::move(c);
    if (best && best->length() == 3) break;
  }
  return best;
}

Graph prune_degenerate(const Graph& g) {
  const std::size_t n = g.n();
  std::vector<std::size_t> deg(n);
  std::vector<char> gone(n, 0);
  std::vector<Vertex> stack;
  for (Vertex v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    if (deg[v] < 2) stack.push_back(v);
  }
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    if (gone[v]) continue;
    gone[v] = 1;
    for (Vertex u : g.adj(v))
      if (!gone[u] && --deg[u] < 2) stack.push_back(u);
  }
  std::vector<Edge> keep;
  for (auto e : g.edges())
    if (!gone[e.first] && !gone[e.second]) keep.push_back(e);
  return Graph::from_edges(n, keep);
}

Neighborhood neighborhood(const Graph& g, Vertex v, std::size_t radius) {
  if (v >= g.n()) throw ConfigError("neighborhood: vertex out of range");
  Neighborhood nb;
  std::vector<std::uint32_t> dist(g.n(), kUnreached);
  std::vector<Vertex> q{v};
  dist[v] = 0;
  for (std::size_t h = 0; h < q.size(); ++h) {
    Vertex x = q[h];
    if (dist[x] + 1 > radius) continue;
    for (Vertex y : g.adj(x)) {
      nb.edges.push_back(make_edge(x, y));
      if (dist[y] == kUnreached) {
        dist[y] = dist[x] + 1;
        q.push_back(y);
      }
    }
  }
  nb.vertices = std::move(q);
  std::sort(nb.vertices.begin(), nb.vertices.end());
  std::sort(nb.edges.begin(), nb.edges.end());
  nb.edges.erase(std::unique(nb.edges.begin(), nb.edges.end()), nb.edges.end());
  return nb;
}

Instance make_instance(const SubgraphPattern& h, std::vector<Vertex> map) {
  Instance ins;
  for (auto [a, b] : h.edges) ins.edges.push_back(make_edge(map[a], map[b]));
  std::sort(ins.edges.begin(), ins.edges.end());
  ins.vertices = map;
  std::sort(ins.vertices.begin(), ins.vertices.end());
  ins.map = std::move(map);
  return ins;
}

namespace {

struct Embedder {
  const Graph& g;
  const SubgraphPattern& h;
  std::size_t limit;
  std::vector<std::vector<std::size_t>> back;  // back[i]: t < i adjacent to z_i
  std::vector<Vertex> map;
  std::vector<char> used;
  std::set<Instance> found;

  bool rec(std::size_t i) {
    if (i == h.p) {
      found.insert(make_instance(h, map));
      return limit != 0 && found.size() >= limit;
    }
    auto try_vertex = [&](Vertex v) {
      if (used[v]) return false;
      for (std::size_t t : back[i])
        if (!g.has_edge(map[t], v)) return false;
      map[i] = v;
      used[v] = 1;
      bool stop = rec(i + 1);
      used[v] = 0;
      return stop;
    };
    if (!back[i].empty()) {
      for (Vertex v : g.adj(map[back[i].front()]))
        if (try_vertex(v)) return true;
    } else {
      for (Vertex v = 0; v < g.n(); ++v)
        if (try_vertex(v)) return true;
    }
    return false;
  }
};

}  // namespace

std::vector<Instance> enumerate_subgraph(const Graph& g, const SubgraphPattern& h, std::size_t limit) {
  if (h.p > 10) throw ConfigError("pattern too large for the oracle (p > 10)");
  if (h.p > g.n()) return {};
  Embedder e{g, h, limit, std::vector<std::vector<std::size_t>>(h.p), std::vector<Vertex>(h.p),
             std::vector<char>(g.n(), 0), {}};
  for (auto [a, b] : h.edges) e.back[std::max(a, b)].push_back(std::min(a, b));
  e.rec(0);
  return {e.found.begin(), e.found.end()};
}

namespace {

struct CycleSearch {
  const Graph& g;
  std::size_t len;
  Vertex s = 0;
  std::vector<Vertex> path;
  std::vector<char> on;

  bool rec(Vertex x) {
    if (path.size() == len) return g.has_edge(x, s) && path[1] < path.back();
    for (Vertex y : g.adj(x)) {
      if (y <= s || on[y]) continue;
      path.push_back(y);
      on[y] = 1;
      if (rec(y)) return true;
      on[y] = 0;
      path.pop_back();
    }
    return false;
  }
};

}  // namespace

std::optional<CycleWitness> find_cycle_of_length(const Graph& g, std::size_t len) {
  if (len < 3 || len > g.n()) return std::nullopt;
  CycleSearch cs{g, len, 0, {}, std::vector<char>(g.n(), 0)};
  for (Vertex s = 0; s < g.n(); ++s) {
    cs.s = s;
    cs.path.assign(1, s);
    if (cs.rec(s)) return CycleWitness{cs.path};
  }
  return std::nullopt;
}

}  // namespace cyclesim
