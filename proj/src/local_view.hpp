#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "cyclesim/graph.hpp"
#include "cyclesim/oracles.hpp"

namespace cyclesim::detail {

// A node's known edge set, relabelled into a compact graph.
class LocalView {
 public:
  explicit LocalView(const std::vector<Edge>& edges) {
    for (auto [a, b] : edges) {
      ids_.push_back(a);
      ids_.push_back(b);
    }
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
    std::vector<Edge> local;
    local.reserve(edges.size());
    for (auto [a, b] : edges) local.push_back(make_edge(local_id(a), local_id(b)));
    g_ = Graph::from_edges(ids_.size(), local);
  }

  const Graph& graph() const { return g_; }
  bool contains(Vertex v) const { return std::binary_search(ids_.begin(), ids_.end(), v); }
  Vertex local_id(Vertex v) const {
    return static_cast<Vertex>(std::lower_bound(ids_.begin(), ids_.end(), v) - ids_.begin());
  }
  Vertex global_id(Vertex l) const { return ids_[l]; }
  std::size_t size() const { return ids_.size(); }

  std::optional<CycleWitness> shortest_cycle_through(Vertex v) const {
    if (!contains(v)) return std::nullopt;
    auto w = cyclesim::shortest_cycle_through(g_, local_id(v));
    if (w)
      for (auto& x : w->vertices) x = global_id(x);
    return w;
  }
  std::optional<CycleWitness> shortest_cycle() const {
    auto w = cyclesim::shortest_cycle(g_);
    if (w)
      for (auto& x : w->vertices) x = global_id(x);
    return w;
  }
  bool is_forest() const { return brute_girth(g_).is_infinite(); }

 private:
  std::vector<Vertex> ids_;
  Graph g_;
};

}  // namespace cyclesim::detail
