#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cyclesim {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;  // stored with first < second

inline Edge make_edge(Vertex a, Vertex b) { return a < b ? Edge{a, b} : Edge{b, a}; }

// Simple undirected graph on vertices 0..n-1 with sorted adjacency lists.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : adj_(n) {}

  // Throws ConfigError on self-loops, duplicates or out-of-range ids.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges);
  // Like from_edges but silently drops duplicates.
  static Graph from_edges_dedup(std::size_t n, std::vector<Edge> edges);

  std::size_t n() const { return adj_.size(); }
  std::size_t m() const { return m_; }
  std::span<const Vertex> adj(Vertex v) const { return adj_[v]; }
  std::size_t degree(Vertex v) const { return adj_[v].size(); }
  std::size_t max_degree() const;
  bool has_edge(Vertex u, Vertex v) const;
  std::vector<Edge> edges() const;  // sorted

  bool operator==(const Graph&) const = default;

 private:
  std::vector<std::vector<Vertex>> adj_;
  std::size_t m_ = 0;
};

// Ordered vertex sequence claimed to close into a simple cycle.
struct CycleWitness {
  std::vector<Vertex> vertices;
  std::size_t length() const { return vertices.size(); }
  bool operator==(const CycleWitness&) const = default;
};

bool validate_witness(const Graph& g, const CycleWitness& w, std::size_t expected_len);
bool validate_witness(const Graph& g, const CycleWitness& w);  // any length >= 3

// Shortest-cycle length, or infinite for forests.
class Girth {
 public:
  enum class Kind : std::uint8_t { Finite, Infinite };

  static Girth infinite() { return Girth(Kind::Infinite, 0); }
  static Girth of(std::uint32_t len) { return Girth(Kind::Finite, len); }

  bool is_infinite() const { return kind_ == Kind::Infinite; }
  std::uint32_t value() const;  // faults when infinite
  std::string str() const { return is_infinite() ? "inf" : std::to_string(len_); }
  bool operator==(const Girth&) const = default;

 private:
  Girth(Kind k, std::uint32_t len) : kind_(k), len_(len) {}
  Kind kind_;
  std::uint32_t len_;
};

}  // namespace cyclesim
