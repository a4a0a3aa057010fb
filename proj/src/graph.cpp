#include "cyclesim/graph.hpp"

#include <algorithm>

#include "cyclesim/errors.hpp"

namespace cyclesim {

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
  Graph g(n);
  for (auto [a, b] : edges) {
    if (a >= n || b >= n) throw ConfigError("edge endpoint out of range");
    if (a == b) throw ConfigError("self-loop " + std::to_string(a));
    g.adj_[a].push_back(b);
    g.adj_[b].push_back(a);
  }
  for (auto& l : g.adj_) {
    std::sort(l.begin(), l.end());
    if (std::adjacent_find(l.begin(), l.end()) != l.end()) throw ConfigError("parallel edge");
  }
  g.m_ = edges.size();
  return g;
}

Graph Graph::from_edges_dedup(std::size_t n, std::vector<Edge> edges) {
  for (auto& e : edges) e = make_edge(e.first, e.second);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return from_edges(n, edges);
}

std::size_t Graph::max_degree() const {
  std::size_t d = 0;
  for (const auto& l : adj_) d = std::max(d, l.size());
  return d;
}

bool Graph::has_edge(Vertex u, Vertex v) const {
  if (u >= n() || v >= n()) return false;
  const auto& a = adj_[u].size() <= adj_[v].size() ? adj_[u] : adj_[v];
  Vertex t = adj_[u].size() <= adj_[v].size() ? v : u;
  return std::binary_search(a.begin(), a.end(), t);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(m_);
  for (Vertex u = 0; u < n(); ++u)
    for (Vertex v : adj_[u])
      if (u < v) out.emplace_back(u, v);
  return out;
}

bool validate_witness(const Graph& g, const CycleWitness& w) {
  const auto& c = w.vertices;
  if (c.size() < 3) return false;
  std::vector<Vertex> s = c;
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) return false;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!g.has_edge(c[i], c[(i + 1) % c.size()])) return false;
  return true;
}

bool validate_witness(const Graph& g, const CycleWitness& w, std::size_t expected_len) {
  return w.length() == expected_len && validate_witness(g, w);
}

std::uint32_t Girth::value() const {
  if (is_infinite()) fault("value() of infinite girth");
  return len_;
}

}  // namespace cyclesim
