#pragma once

#include <cstdint>

#include "cyclesim/graph.hpp"

namespace cyclesim {

Graph gen_random(std::size_t n, double edge_prob, std::uint64_t seed);

struct Planted {
  Graph graph;
  CycleWitness cycle;
};
Planted plant_cycle(const Graph& g, std::size_t len, std::uint64_t seed);

// Planted C_len plus random edges that never close a shorter cycle: girth is exactly len.
Planted gen_girth(std::size_t n, std::size_t len, std::size_t extra_edges, std::uint64_t seed);

Graph gen_tree(std::size_t n, std::uint64_t seed);
// Random bipartite graph between the first half and second half of the ids.
Graph gen_bipartite(std::size_t n, double edge_prob, std::uint64_t seed);

Graph cycle_graph(std::size_t n);
Graph path_graph(std::size_t n);
Graph complete_graph(std::size_t n);
Graph star_graph(std::size_t leaves);  // center 0
Graph petersen_graph();
// Copies g into a graph with n >= g.n() vertices (extra ids isolated).
Graph pad_isolated(const Graph& g, std::size_t n);
Graph disjoint_union(const Graph& a, const Graph& b);
Graph add_edges(const Graph& g, std::span<const Edge> extra);

}  // namespace cyclesim
