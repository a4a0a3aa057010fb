#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cyclesim/engine.hpp"
#include "cyclesim/graph.hpp"
#include "cyclesim/oracles.hpp"
#include "cyclesim/pattern.hpp"

namespace cyclesim {

inline constexpr double kTreeC1 = 8.0;
inline constexpr double kTreeC2 = 32.0;
inline constexpr double kListCost = 1024.0;

// Parts are consecutive id intervals: part j = [bounds[j], bounds[j+1]).
struct Partition {
  std::vector<Vertex> bounds;

  std::size_t parts() const { return bounds.size() - 1; }
  Vertex begin(std::size_t j) const { return bounds[j]; }
  Vertex end(std::size_t j) const { return bounds[j + 1]; }
  std::size_t part_of(Vertex v) const;
  bool operator==(const Partition&) const = default;
};

struct PartitionTree {
  struct Node {
    std::uint32_t partition = 0;  // index into partitions
    std::uint32_t layer = 0;
    std::int64_t parent = -1;     // tree node
    std::uint32_t parent_part = 0;
    std::vector<std::uint32_t> children;  // one per part; empty at the last layer
  };

  std::size_t n = 0, p = 0, x = 0;
  std::uint64_t m = 0, m_tilde = 0;
  SubgraphPattern h;
  std::vector<Partition> partitions;  // [0] is the root partition R
  std::vector<std::vector<std::uint32_t>> multisets;  // R-part multiset each partition was built for
  std::vector<Node> nodes;            // [0] is the root
  std::vector<std::uint32_t> leaves;  // last-layer nodes in lexicographic order

  double bound1() const;                 // c1 m / x + n
  double bound2(std::size_t d) const;    // c2 d m~ / x^2 + n
  // Part chain U_{v,0..p-1} of the node assigned to leaf `rank`, part `j`.
  std::vector<std::pair<Vertex, Vertex>> chain(std::size_t rank, std::size_t j) const;
};

std::size_t branching(std::size_t n, std::size_t p);

PartitionTree build_partition_tree(Engine& e, const Graph& g, const SubgraphPattern& h);
PartitionTree build_partition_tree(const Graph& g, const SubgraphPattern& h);

// From-scratch recomputation of both load conditions, part-count bounds and refinement.
struct TreeAudit {
  std::size_t parts_checked = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};
TreeAudit audit_tree(const Graph& g, const PartitionTree& t);

struct ListingStats {
  std::size_t max_learned = 0;  // per-node learned multiset size
  double learn_bound = 0;
};
std::vector<Instance> list_with_tree(Engine& e, const Graph& g, const SubgraphPattern& h, const PartitionTree& t,
                                     ListingStats* stats = nullptr);

struct ListingReport {
  std::vector<Instance> instances;
  PartitionTree tree;
  ListingStats stats;
  RunMetrics metrics;
};
ListingReport list_subgraph(Engine& e, const Graph& g, const SubgraphPattern& h);
ListingReport list_subgraph(const Graph& g, const SubgraphPattern& h);

struct C2kResult {
  enum class Kind { Found, GuaranteedExists, Free };
  Kind kind = Kind::Free;
  std::optional<CycleWitness> witness;
  RunMetrics metrics;
  std::string str() const;
};
C2kResult detect_c2k(const Graph& g, std::uint32_t k);

struct ExactGirthReport {
  Girth girth = Girth::infinite();
  std::optional<CycleWitness> witness;
  std::string path;  // "gather" or "listing"
  RunMetrics metrics;
};
// Requires girth(g) > lower; a shorter listed cycle raises PreconditionViolation.
ExactGirthReport exact_girth_sparse(const Graph& g, std::uint32_t lower);

}  // namespace cyclesim
