#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cyclesim/engine.hpp"
#include "cyclesim/graph.hpp"

namespace cyclesim {

enum class SampleMode { God, Priority };
// Engine runs the node programs round by round; Kernel computes the same per-trial outcome centrally.
enum class Backend { Kernel, Engine };

// T_k(1..k-1): distinct tokens a level-i node may hold and still forward.
std::vector<std::uint64_t> token_caps(std::uint32_t k);
// Largest integer d with d^e <= n.
std::uint64_t int_root(std::uint64_t n, std::uint32_t e);
std::uint64_t default_light_trials(std::uint32_t k);                     // 3 (2k)^{2k}
std::uint64_t default_heavy_iterations(std::size_t n, std::uint32_t k);  // ceil(4 n^{1-1/k})

struct TrialOutcome {
  std::optional<CycleWitness> witness;
  std::uint64_t rounds = 0;  // schedule length of this trial
  bool operator==(const TrialOutcome&) const = default;
};

// Trial primitives. Both backends agree exactly on the outcome and the round count.
TrialOutcome light_trial(const Graph& g, std::uint32_t k, std::uint64_t trial_key, Backend b);
TrialOutcome self_bfs_trial(const Graph& g, std::uint32_t k, std::span<const Vertex> sources, std::uint64_t key,
                            Backend b);
TrialOutcome ns_bfs_trial(const Graph& g, std::uint32_t k, std::span<const Vertex> sources, std::uint64_t key,
                          Backend b);

struct SampleOutcome {
  std::vector<Vertex> sources;  // type S nodes, sorted
  std::uint64_t rounds = 0;
};
std::uint64_t priority_of(std::uint64_t iter_key, Vertex v, std::size_t n);  // in [1, n^3]
SampleOutcome sample_sources(const Graph& g, std::uint64_t iter_key, std::uint64_t horizon, SampleMode mode,
                             Backend b);

struct DetectOptions {
  std::uint64_t light_trials = 0;      // 0: default_light_trials
  std::uint64_t heavy_iterations = 0;  // 0: default_heavy_iterations
  std::uint64_t self_trials = 0;       // 0: default_light_trials
  std::optional<std::uint64_t> horizon;  // priority flooding rounds; default 2 R R'
  SampleMode mode = SampleMode::Priority;
  Backend backend = Backend::Kernel;
};

struct DetectReport {
  std::optional<CycleWitness> witness;
  std::string stage;        // "light", "heavy-self", "heavy-ns"; empty when nothing was found
  std::uint64_t index = 0;  // trial or iteration that found it
  std::uint64_t rounds = 0;             // full schedule for the configured budgets
  std::uint64_t trials_simulated = 0;   // trials actually evaluated before stopping
};

DetectReport detect_light_c2k(const Graph& g, std::uint32_t k, std::uint64_t seed, const DetectOptions& opt = {});
DetectReport detect_heavy_c2k(const Graph& g, std::uint32_t k, std::uint64_t seed, const DetectOptions& opt = {});
DetectReport detect_c2k_congest(const Graph& g, std::uint32_t k, std::uint64_t seed, const DetectOptions& opt = {});

// Phase k of the girth search treats degree <= n^{1/floor(k/2)} as light.
std::uint64_t girth_light_cap(std::size_t n, std::uint32_t k);
// Heavy samples in phase k: ceil(factor * n^{1 - 1/floor(k/2)} * log2 n).
std::uint64_t girth_heavy_samples(std::size_t n, std::uint32_t k, double factor);

struct GirthOptions {
  double heavy_factor = 1.0;
};

struct PhaseRecord {
  std::uint32_t k = 0;
  std::string step;  // "triangle", "light", "heavy" or "gather"
  bool halted = false;
  std::uint64_t rounds = 0;
};

struct CongestGirthReport {
  Girth girth = Girth::infinite();
  std::uint32_t phase = 0;  // phase in which a node halted; 0 when the gather fallback decided
  std::string step;
  std::optional<CycleWitness> witness;  // set when the halting node's cycle validates
  std::vector<PhaseRecord> trace;
  std::uint64_t rounds = 0;
};

// Halting below the true girth is a fault.
CongestGirthReport exact_girth_congest(const Graph& g, std::uint64_t seed, const GirthOptions& opt = {});

}  // namespace cyclesim
