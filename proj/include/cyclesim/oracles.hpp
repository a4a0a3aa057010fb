#pragma once

#include <optional>
#include <vector>

#include "cyclesim/graph.hpp"
#include "cyclesim/pattern.hpp"

namespace cyclesim {

Girth brute_girth(const Graph& g);
std::optional<CycleWitness> shortest_cycle(const Graph& g);

// Shortest cycle through v, by BFS from v; exact.
std::optional<CycleWitness> shortest_cycle_through(const Graph& g, Vertex v);

// Iteratively strips vertices of degree < 2; ids are kept, stripped vertices become isolated.
Graph prune_degenerate(const Graph& g);

// N_i(v): vertices within distance i and the edges touching vertices within distance i-1.
struct Neighborhood {
  std::vector<Vertex> vertices;  // sorted
  std::vector<Edge> edges;       // sorted
  bool operator==(const Neighborhood&) const = default;
};
Neighborhood neighborhood(const Graph& g, Vertex v, std::size_t radius);
std::vector<std::uint32_t> bfs_distances(const Graph& g, Vertex src);  // kUnreached if none
inline constexpr std::uint32_t kUnreached = 0xFFFFFFFFu;

// One H-copy: the image edge set is the canonical key.
struct Instance {
  std::vector<Edge> edges;        // sorted image edges
  std::vector<Vertex> vertices;   // sorted image vertices
  std::vector<Vertex> map;        // z_i -> map[i], one witness embedding
  bool operator<(const Instance& o) const { return edges < o.edges; }
  bool operator==(const Instance& o) const { return edges == o.edges; }
};
Instance make_instance(const SubgraphPattern& h, std::vector<Vertex> map);

// All copies of h in g, sorted and deduplicated. Stops after `limit` copies when nonzero.
std::vector<Instance> enumerate_subgraph(const Graph& g, const SubgraphPattern& h, std::size_t limit = 0);

// Exhaustive search for a simple cycle of exactly `len` vertices.
std::optional<CycleWitness> find_cycle_of_length(const Graph& g, std::size_t len);

}  // namespace cyclesim
