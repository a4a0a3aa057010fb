#include "cyclesim/c6_reduction.hpp"

#include <algorithm>
#include <cmath>

#include "cyclesim/errors.hpp"
#include "cyclesim/oracles.hpp"
#include "cyclesim/rng.hpp"

namespace cyclesim {

std::size_t DirectedGraph::arcs() const {
  std::size_t a = 0;
  for (const auto& o : out) a += o.size();
  return a;
}

bool DirectedGraph::has_arc(Vertex u, Vertex v) const { return std::binary_search(out[u].begin(), out[u].end(), v); }

DirectedGraph build_reduction_graph(const Graph& g, std::span<const std::uint32_t> colors) {
  if (colors.size() != g.n()) throw ConfigError("one color per vertex required");
  DirectedGraph d(g.n());
  for (Vertex u = 0; u < g.n(); ++u) {
    const auto cw = (colors[u] + 1) % 6, cv = (colors[u] + 2) % 6;
    for (Vertex w : g.adj(u)) {
      if (colors[w] != cw) continue;
      for (Vertex v : g.adj(w))
        if (colors[v] == cv) d.out[u].push_back(v);
    }
    std::sort(d.out[u].begin(), d.out[u].end());
    d.out[u].erase(std::unique(d.out[u].begin(), d.out[u].end()), d.out[u].end());
  }
  return d;
}

namespace {

template <class F>
void each_triangle(const DirectedGraph& d, F&& f) {
  for (Vertex a = 0; a < d.n(); ++a)
    for (Vertex b : d.out[a]) {
      if (b < a) continue;
      for (Vertex c : d.out[b])
        if (c > a && d.has_arc(c, a) && !f(std::array<Vertex, 3>{a, b, c})) return;
    }
}

}  // namespace

std::optional<std::array<Vertex, 3>> find_directed_triangle(const DirectedGraph& d) {
  std::optional<std::array<Vertex, 3>> out;
  each_triangle(d, [&](const std::array<Vertex, 3>& t) {
    out = t;
    return false;
  });
  return out;
}

std::size_t count_directed_triangles(const DirectedGraph& d) {
  std::size_t c = 0;
  each_triangle(d, [&](const std::array<Vertex, 3>&) { return ++c, true; });
  return c;
}

std::optional<CycleWitness> find_well_colored_c6(const Graph& g, std::span<const std::uint32_t> colors) {
  if (colors.size() != g.n()) throw ConfigError("one color per vertex required");
  for (const auto& inst : enumerate_subgraph(g, SubgraphPattern::cycle(6))) {
    for (int dir : {1, 5}) {
      bool ok = true;
      for (std::size_t i = 0; i < 6 && ok; ++i)
        ok = colors[inst.map[(i + 1) % 6]] == (colors[inst.map[i]] + dir) % 6;
      if (!ok) continue;
      CycleWitness w{inst.map};
      if (dir == 5) std::reverse(w.vertices.begin(), w.vertices.end());
      return w;
    }
  }
  return std::nullopt;
}

CycleWitness lift_triangle(const Graph& g, std::span<const std::uint32_t> colors, const std::array<Vertex, 3>& tri) {
  CycleWitness w;
  for (std::size_t i = 0; i < 3; ++i) {
    const Vertex u = tri[i], v = tri[(i + 1) % 3];
    auto bridge = std::find_if(g.adj(u).begin(), g.adj(u).end(),
                               [&](Vertex x) { return colors[x] == (colors[u] + 1) % 6 && g.has_edge(x, v); });
    if (bridge == g.adj(u).end()) fault("reduction arc without a bridge");
    w.vertices.push_back(u);
    w.vertices.push_back(*bridge);
  }
  if (!validate_witness(g, w, 6)) fault("lifted triangle is not a simple 6-cycle");
  return w;
}

std::uint64_t reduction_iterations(std::size_t n) {
  if (n < 2) return 1;
  const double x = std::sqrt(static_cast<double>(n)) * std::log2(static_cast<double>(n));
  return static_cast<std::uint64_t>(std::ceil(x));
}

ReducedInstance reduce_with_colors(const Graph& g, std::vector<std::uint32_t> colors) {
  const std::size_t n = g.n();
  if (colors.size() != n) throw ConfigError("one color per vertex required");
  if (std::any_of(colors.begin(), colors.end(), [](std::uint32_t c) { return c >= 6; }))
    throw ConfigError("colors must lie in 0..5");
  ReducedInstance out;
  std::vector<char> drop(n, 0);
  for (Vertex v = 0; v < n; ++v)
    if (g.degree(v) * g.degree(v) >= n) {
      drop[v] = 1;
      out.removed.push_back(v);
    }
  std::vector<Edge> kept;
  for (auto [a, b] : g.edges())
    if (!drop[a] && !drop[b]) kept.push_back({a, b});
  const auto low = Graph::from_edges(n, kept);
  out.colors = std::move(colors);
  out.graph = build_reduction_graph(low, out.colors);
  // Each node learns its arcs by broadcasting its remaining neighbors with their colors.
  out.rounds = low.max_degree();
  return out;
}

ReductionResult reduce_c6_to_directed_triangles(const Graph& g, std::uint64_t seed, DetectOptions opt) {
  if (opt.heavy_iterations == 0) opt.heavy_iterations = reduction_iterations(g.n());
  auto heavy = detect_heavy_c2k(g, 3, derive(seed, "reduce-heavy"), opt);
  if (heavy.witness) return EarlyFound{*heavy.witness, heavy.index, heavy.rounds};

  const auto key = derive(seed, "reduce-colors");
  std::vector<std::uint32_t> colors(g.n());
  for (Vertex v = 0; v < g.n(); ++v) colors[v] = trial_color(key, v, 6);
  auto out = reduce_with_colors(g, std::move(colors));
  out.rounds += heavy.rounds;
  return out;
}

}  // namespace cyclesim
