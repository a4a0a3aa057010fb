#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "cyclesim/congest_cycles.hpp"
#include "cyclesim/graph.hpp"

namespace cyclesim {

struct DirectedGraph {
  std::vector<std::vector<Vertex>> out;  // sorted, no self-loops

  explicit DirectedGraph(std::size_t n = 0) : out(n) {}
  std::size_t n() const { return out.size(); }
  std::size_t arcs() const;
  bool has_arc(Vertex u, Vertex v) const;
  bool operator==(const DirectedGraph&) const = default;
};

// Arc (u, v) iff some w is adjacent to both with c(w) = c(u) + 1 and c(v) = c(u) + 2 (mod 6).
DirectedGraph build_reduction_graph(const Graph& g, std::span<const std::uint32_t> colors);
// Lexicographically smallest (a, b, c) with a the minimum id and arcs a->b->c->a.
std::optional<std::array<Vertex, 3>> find_directed_triangle(const DirectedGraph& d);
std::size_t count_directed_triangles(const DirectedGraph& d);  // each triangle once
// A 6-cycle whose colors step by +1 mod 6 in one direction, found by exhaustive enumeration.
std::optional<CycleWitness> find_well_colored_c6(const Graph& g, std::span<const std::uint32_t> colors);
// The 6-cycle a->w1->b->w2->c->w3 behind a triangle of build_reduction_graph(g, colors).
CycleWitness lift_triangle(const Graph& g, std::span<const std::uint32_t> colors, const std::array<Vertex, 3>& tri);

std::uint64_t reduction_iterations(std::size_t n);  // ceil(sqrt(n) log2 n)

struct ReducedInstance {
  DirectedGraph graph;
  std::vector<std::uint32_t> colors;  // c(v) in [0, 6)
  std::vector<Vertex> removed;        // degree >= sqrt(n), sorted
  std::uint64_t rounds = 0;           // heavy stage plus one neighbor-list broadcast
};

struct EarlyFound {
  CycleWitness witness;
  std::uint64_t iteration = 0;
  std::uint64_t rounds = 0;
};

using ReductionResult = std::variant<ReducedInstance, EarlyFound>;

// Deletes degree >= sqrt(n) vertices and builds G' under the given colors; no heavy stage.
ReducedInstance reduce_with_colors(const Graph& g, std::vector<std::uint32_t> colors);

// opt.heavy_iterations = 0 means reduction_iterations(n); light settings are ignored.
ReductionResult reduce_c6_to_directed_triangles(const Graph& g, std::uint64_t seed, DetectOptions opt = {});

}  // namespace cyclesim
