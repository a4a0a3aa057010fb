#pragma once

#include <map>
#include <memory>
#include <vector>

#include "cyclesim/engine.hpp"
#include "cyclesim/errors.hpp"
#include "cyclesim/graph.hpp"

namespace cyclesim::detail {

using PredMap = std::map<Vertex, std::map<Vertex, Vertex>>;  // node -> origin -> smallest sender

// Path from `from` back toward `origin`, excluding the origin.
inline std::vector<Vertex> back_trace(const PredMap& pred, Vertex from, Vertex origin) {
  std::vector<Vertex> seq;
  for (Vertex x = from; x != origin; x = pred.at(x).at(origin)) seq.push_back(x);
  return seq;
}

// Runs one program per node on the CONGEST topology of g; returns the rounds used.
inline std::uint64_t run_programs(const Graph& g, std::vector<std::unique_ptr<NodeProgram>>& progs,
                                  std::uint64_t limit) {
  Engine e(Topology::congest(g), 0);
  std::vector<NodeProgram*> ptrs;
  for (auto& p : progs) ptrs.push_back(p.get());
  auto res = e.run(ptrs, limit);
  if (res.status != RunStatus::Halted) fault("CONGEST run did not halt on schedule");
  return res.metrics.rounds;
}

}  // namespace cyclesim::detail
