#include "cyclesim/generators.hpp"

#include <algorithm>
#include <numeric>

#include "cyclesim/errors.hpp"
#include "cyclesim/oracles.hpp"
#include "cyclesim/rng.hpp"

namespace cyclesim {

Graph gen_random(std::size_t n, double edge_prob, std::uint64_t seed) {
  if (n < 1) throw ConfigError("gen_random: n >= 1 required");
  SplitMix rng(derive(seed, "er"));
  std::vector<Edge> e;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (rng.chance(edge_prob)) e.emplace_back(u, v);
  return Graph::from_edges(n, e);
}

Graph gen_bipartite(std::size_t n, double edge_prob, std::uint64_t seed) {
  SplitMix rng(derive(seed, "bipartite"));
  std::vector<Edge> e;
  std::size_t half = n / 2;
  for (Vertex u = 0; u < half; ++u)
    for (auto v = static_cast<Vertex>(half); v < n; ++v)
      if (rng.chance(edge_prob)) e.emplace_back(u, v);
  return Graph::from_edges(n, e);
}

Planted plant_cycle(const Graph& g, std::size_t len, std::uint64_t seed) {
  const std::size_t n = g.n();
  if (len < 3) throw ConfigError("plant_cycle: length >= 3 required");
  if (len > n) throw ConfigError("plant_cycle: length exceeds n");
  SplitMix rng(derive(seed, "plant"));
  std::vector<Vertex> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  for (std::size_t i = 0; i < len; ++i) std::swap(ids[i], ids[i + rng.below(n - i)]);
  ids.resize(len);
  auto e = g.edges();
  for (std::size_t i = 0; i < len; ++i) e.push_back(make_edge(ids[i], ids[(i + 1) % len]));
  return {Graph::from_edges_dedup(n, std::move(e)), CycleWitness{ids}};
}

Planted gen_girth(std::size_t n, std::size_t len, std::size_t extra_edges, std::uint64_t seed) {
  Planted pl = plant_cycle(Graph(n), len, seed);
  SplitMix rng(derive(seed, "girth-extra"));
  auto edges = pl.graph.edges();
  Graph cur = pl.graph;
  std::size_t added = 0;
  std::vector<std::vector<Vertex>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<std::uint32_t> dist(n, kUnreached);
  std::vector<Vertex> q;
  for (std::size_t attempt = 0; added < extra_edges && attempt < 64 * extra_edges + 64; ++attempt) {
    auto u = static_cast<Vertex>(rng.below(n));
    auto v = static_cast<Vertex>(rng.below(n));
    if (u == v) continue;
    // Reject when v lies within distance len-2 of u.
    bool close = false;
    q.assign(1, u);
    dist[u] = 0;
    for (std::size_t h = 0; h < q.size() && !close; ++h) {
      Vertex x = q[h];
      if (dist[x] == len - 2) continue;
      for (Vertex y : adj[x])
        if (dist[y] == kUnreached) {
          dist[y] = dist[x] + 1;
          if (y == v) close = true;
          q.push_back(y);
        }
    }
    for (Vertex x : q) dist[x] = kUnreached;
    if (close) continue;
    adj[u].push_back(v);
    adj[v].push_back(u);
    edges.push_back(make_edge(u, v));
    ++added;
  }
  pl.graph = Graph::from_edges(n, edges);
  return pl;
}

Graph gen_tree(std::size_t n, std::uint64_t seed) {
  SplitMix rng(derive(seed, "tree"));
  std::vector<Edge> e;
  for (Vertex v = 1; v < n; ++v) e.push_back(make_edge(static_cast<Vertex>(rng.below(v)), v));
  return Graph::from_edges(n, e);
}

Graph cycle_graph(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex i = 0; i < n; ++i) e.push_back(make_edge(i, static_cast<Vertex>((i + 1) % n)));
  return Graph::from_edges(n, e);
}

Graph path_graph(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph::from_edges(n, e);
}

Graph complete_graph(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph::from_edges(n, e);
}

Graph star_graph(std::size_t leaves) {
  std::vector<Edge> e;
  for (Vertex i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return Graph::from_edges(leaves + 1, e);
}

Graph petersen_graph() {
  std::vector<Edge> e;
  for (Vertex i = 0; i < 5; ++i) {
    e.push_back(make_edge(i, (i + 1) % 5));
    e.push_back(make_edge(i, i + 5));
    e.push_back(make_edge(i + 5, (i + 2) % 5 + 5));
  }
  return Graph::from_edges(10, e);
}

Graph pad_isolated(const Graph& g, std::size_t n) {
  if (n < g.n()) throw ConfigError("pad_isolated: target smaller than graph");
  return Graph::from_edges(n, g.edges());
}

Graph disjoint_union(const Graph& a, const Graph& b) {
  auto e = a.edges();
  auto off = static_cast<Vertex>(a.n());
  for (auto [x, y] : b.edges()) e.emplace_back(x + off, y + off);
  return Graph::from_edges(a.n() + b.n(), e);
}

Graph add_edges(const Graph& g, std::span<const Edge> extra) {
  auto e = g.edges();
  e.insert(e.end(), extra.begin(), extra.end());
  return Graph::from_edges_dedup(g.n(), std::move(e));
}

}  // namespace cyclesim
