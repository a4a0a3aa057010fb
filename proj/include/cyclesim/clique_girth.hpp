#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cyclesim/engine.hpp"
#include "cyclesim/graph.hpp"

namespace cyclesim {

struct GirthEstimate {
  enum class Kind { Exact, PlusOne, Acyclic };
  Kind kind = Kind::Acyclic;
  std::uint32_t value = 0;  // g for Exact; a for PlusOne (g in {a, a+1})
  std::optional<CycleWitness> witness;

  static GirthEstimate exact(CycleWitness w);
  static GirthEstimate plus_one(std::uint32_t a) { return {Kind::PlusOne, a, std::nullopt}; }
  static GirthEstimate acyclic() { return {}; }

  bool consistent_with(const Girth& g) const;
  std::string str() const;
};

// Per node v: the edge set of N_a(v).
struct NeighborhoodState {
  std::uint32_t a = 0;
  std::vector<std::vector<Edge>> known;
};

struct PreprocessOutcome {
  std::optional<GirthEstimate> early;
  Graph pruned;
  bool gathered = false;
};

// Every node learns every edge; the target load is m, declared as load_factor * n.
Graph gather_all(Engine& e, const Graph& g, double load_factor);

// Degree/XOR broadcast, then either a whole-graph gather (m <= 8n) or local replay of the peeling.
PreprocessOutcome preprocess(Engine& e, const Graph& g);

struct Phase1Options {
  double load_factor = 1.0;  // declared routing bound; > 1 only to exercise the listing below its regime
  std::optional<std::uint32_t> radius;  // learned radius; default floor(t/2)
  std::optional<std::uint32_t> segments;  // segment count override
  std::optional<std::uint32_t> k;  // forces the listing with this k instead of the density-derived one
};

struct Phase1Outcome {
  std::optional<GirthEstimate> exact;
  NeighborhoodState state;
  std::optional<std::uint32_t> k;
  bool shortcut = false;
  std::size_t segments = 0;
  std::size_t subset_size = 0;
};

Phase1Outcome phase1_path_listing(Engine& e, const Graph& g, const Phase1Options& opt = {});

struct Phase2Outcome {
  enum class Kind { Exact, State1, State2 };
  Kind kind;
  std::optional<GirthEstimate> exact;
  std::uint32_t b = 0;  // radius now known
  std::uint64_t primitives = 0;
};

// One neighborhood-doubling round. Requires every N_a(v) to be a tree.
Phase2Outcome phase2_double(Engine& e, const Graph& g, NeighborhoodState& st);

// Each node reports its shortest cycle through itself; the minimum is exact whenever any is seen.
std::optional<GirthEstimate> broadcast_cycle_check(Engine& e, const Graph& g, const NeighborhoodState& st);

struct GirthApproxReport {
  GirthEstimate estimate;
  RunMetrics metrics;
  std::string path;  // "gather", "phase1", "phase2", "phase2-state2"
  std::uint32_t phase2_calls = 0;
  std::uint64_t max_phase2_primitives = 0;
};

GirthApproxReport girth_plus_one(const Graph& g, std::uint64_t seed = 0, EngineConfig cfg = {});

}  // namespace cyclesim
