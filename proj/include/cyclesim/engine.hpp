#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "cyclesim/graph.hpp"

namespace cyclesim {

inline constexpr std::size_t kMaxWordFields = 4;

// One message over one link in one round: up to c_w integer fields.
struct Word {
  std::array<std::int64_t, kMaxWordFields> f{};
  std::uint8_t len = 0;

  Word() = default;
  Word(std::initializer_list<std::int64_t> v);
  std::int64_t operator[](std::size_t i) const { return f[i]; }
  std::size_t bits() const;
  bool operator==(const Word&) const = default;
};

enum class TopologyKind { Clique, Congest };

struct Topology {
  TopologyKind kind;
  const Graph* graph;  // communication graph under CONGEST; input data under CLIQUE
  std::size_t n;

  static Topology clique(const Graph& g) { return {TopologyKind::Clique, &g, g.n()}; }
  static Topology congest(const Graph& g) { return {TopologyKind::Congest, &g, g.n()}; }
  std::uint64_t links() const;
};

struct Incoming {
  Vertex from;
  Word word;
};

struct RunMetrics {
  std::uint64_t rounds = 0;
  std::uint64_t words_total = 0;
  std::uint64_t peak_link_load = 0;
  std::uint64_t charged_routing_rounds = 0;
  std::uint64_t primitive_calls = 0;

  RunMetrics& operator+=(const RunMetrics& o);
  bool operator==(const RunMetrics&) const = default;
};

struct EngineConfig {
  std::size_t word_fields = 4;  // c_w
  std::uint64_t route_cost = 16;  // C_route
  double input_factor = 16.0;  // source input bound, in words per n
};

class NodeContext;

class NodeProgram {
 public:
  virtual ~NodeProgram() = default;
  virtual void step(NodeContext& ctx) = 0;
};

enum class RunStatus { Halted, Timeout };

struct RunResult {
  RunStatus status = RunStatus::Halted;
  RunMetrics metrics;  // this run only
};

struct RouteOptions {
  double max_load_factor = 1.0;  // declared bound on per-node load, in units of n words
  std::size_t source_input_words = 0;
};

struct Message {
  Vertex src;
  Vertex dst;
  Word word;
};

struct RunState;

class NodeContext {
 public:
  Vertex id() const { return v_; }
  std::size_t n() const;
  std::uint64_t round() const;
  std::span<const Incoming> inbox() const;
  std::span<const Vertex> neighbors() const;
  std::uint64_t key() const;  // per-node random stream key

  void send(Vertex to, const Word& w);
  void send_all(const Word& w);
  // No step calls before round r (or before a message arrives, if asked).
  void sleep_until(std::uint64_t r, bool wake_on_message = false);
  void halt();

 private:
  friend class Engine;
  NodeContext(RunState* s, Vertex v) : s_(s), v_(v) {}
  RunState* s_;
  Vertex v_;
};

// Round engine for one topology. Strict runs and charged primitives add into metrics().
class Engine {
 public:
  Engine(Topology t, std::uint64_t seed, EngineConfig cfg = {});

  RunResult run(std::span<NodeProgram* const> programs, std::uint64_t round_limit);

  template <class P>
  RunResult run_all(std::vector<P>& programs, std::uint64_t round_limit) {
    std::vector<NodeProgram*> ptrs;
    ptrs.reserve(programs.size());
    for (auto& p : programs) ptrs.push_back(&p);
    return run(ptrs, round_limit);
  }

  // Every node learns every value: 1 round, n(n-1) words. Clique only.
  std::vector<Word> broadcast_all(std::span<const Word> values);
  // Delivers msgs and charges C_route * ceil(max node load / n) rounds. Clique only.
  std::vector<std::vector<Incoming>> route(std::span<const Message> msgs, RouteOptions opt);

  // Rounds spent by a schedule that is accounted analytically.
  void charge_rounds(std::uint64_t rounds, std::uint64_t words);

  const RunMetrics& metrics() const { return total_; }
  const Topology& topology() const { return topo_; }
  const EngineConfig& config() const { return cfg_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t word_bits() const;
  void check_word(const Word& w) const;

 private:
  Topology topo_;
  std::uint64_t seed_;
  EngineConfig cfg_;
  RunMetrics total_;
};

}  // namespace cyclesim
