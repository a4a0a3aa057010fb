#pragma once

#include <string>
#include <vector>

#include "cyclesim/graph.hpp"

namespace cyclesim {

// Pattern graph H on nodes z_0..z_{p-1}.
struct SubgraphPattern {
  std::string name;
  std::size_t p = 0;
  std::vector<Edge> edges;

  std::size_t k() const { return edges.size(); }
  // d_i: number of neighbors z_t of z_i with t < i.
  std::vector<std::size_t> back_degrees() const;
  bool adjacent(std::size_t i, std::size_t j) const;

  static SubgraphPattern cycle(std::size_t len);
  static SubgraphPattern path(std::size_t nodes);
  static SubgraphPattern complete(std::size_t nodes);
  // "K3", "C4", "P4", or "edges:0-1,1-2,2-0".
  static SubgraphPattern parse(const std::string& spec);
};

}  // namespace cyclesim
