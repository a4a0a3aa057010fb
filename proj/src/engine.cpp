#include "cyclesim/engine.hpp"

#include <algorithm>
#include <bit>
#include <limits>

#include "cyclesim/errors.hpp"
#include "cyclesim/rng.hpp"

namespace cyclesim {

Word::Word(std::initializer_list<std::int64_t> v) {
  if (v.size() > kMaxWordFields) fault("Word: too many fields");
  for (auto x : v) f[len++] = x;
}

std::size_t Word::bits() const {
  std::size_t b = 0;
  for (std::size_t i = 0; i < len; ++i) {
    auto x = f[i];
    auto mag = static_cast<std::uint64_t>(x < 0 ? -(x + 1) : x);
    b += std::max<std::size_t>(1, std::bit_width(mag)) + (x < 0 ? 1 : 0);
  }
  return b;
}

std::uint64_t Topology::links() const {
  if (kind == TopologyKind::Clique) return n * (n - 1);
  return 2 * graph->m();
}

RunMetrics& RunMetrics::operator+=(const RunMetrics& o) {
  rounds += o.rounds;
  words_total += o.words_total;
  peak_link_load = std::max(peak_link_load, o.peak_link_load);
  charged_routing_rounds += o.charged_routing_rounds;
  primitive_calls += o.primitive_calls;
  return *this;
}

namespace {
constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();
}

struct RunState {
  const Engine* engine = nullptr;
  const Topology* topo = nullptr;
  std::size_t n = 0;
  std::uint64_t round = 0;
  std::uint64_t node_root = 0;
  std::vector<std::vector<Incoming>> inbox;
  std::vector<char> halted;
  std::vector<std::uint64_t> wake;
  std::vector<char> wake_on_msg;
  std::size_t live;
  // Links: CONGEST uses CSR offsets into adjacency; CLIQUE uses src*n+dst.
  std::vector<std::size_t> offset;
  struct Link {
    std::vector<Word> q;
    std::size_t head = 0;
    std::uint64_t last_tx = kNever;
    bool active = false;
  };
  std::vector<Link> links;
  std::vector<std::size_t> active;
  RunMetrics m;

  std::size_t link_of(Vertex src, Vertex dst) const {
    if (topo->kind == TopologyKind::Clique) {
      if (dst == src || dst >= n) fault("send: no clique link");
      return static_cast<std::size_t>(src) * n + dst;
    }
    auto a = topo->graph->adj(src);
    auto it = std::lower_bound(a.begin(), a.end(), dst);
    if (it == a.end() || *it != dst) fault("send: target is not a neighbor under CONGEST");
    return offset[src] + static_cast<std::size_t>(it - a.begin());
  }
  Vertex link_target(std::size_t id, Vertex& src) const {
    if (topo->kind == TopologyKind::Clique) {
      src = static_cast<Vertex>(id / n);
      return static_cast<Vertex>(id % n);
    }
    src = static_cast<Vertex>(std::upper_bound(offset.begin(), offset.end(), id) - offset.begin() - 1);
    return topo->graph->adj(src)[id - offset[src]];
  }
};

std::size_t NodeContext::n() const { return s_->n; }
std::uint64_t NodeContext::round() const { return s_->round; }
std::span<const Incoming> NodeContext::inbox() const { return s_->inbox[v_]; }
std::span<const Vertex> NodeContext::neighbors() const { return s_->topo->graph->adj(v_); }
std::uint64_t NodeContext::key() const { return derive(s_->node_root, v_); }

void NodeContext::send(Vertex to, const Word& w) {
  if (s_->halted[v_]) fault("send after halt");
  s_->engine->check_word(w);
  auto id = s_->link_of(v_, to);
  auto& l = s_->links[id];
  l.q.push_back(w);
  s_->m.peak_link_load = std::max<std::uint64_t>(s_->m.peak_link_load, l.q.size() - l.head);
  if (!l.active) {
    l.active = true;
    s_->active.push_back(id);
  }
}

void NodeContext::send_all(const Word& w) {
  for (Vertex u : neighbors()) send(u, w);
}

void NodeContext::sleep_until(std::uint64_t r, bool wake_on_message) {
  s_->wake[v_] = r;
  s_->wake_on_msg[v_] = wake_on_message;
}

void NodeContext::halt() {
  if (!s_->halted[v_]) {
    s_->halted[v_] = 1;
    --s_->live;
  }
}

Engine::Engine(Topology t, std::uint64_t seed, EngineConfig cfg) : topo_(t), seed_(seed), cfg_(cfg) {
  if (cfg_.word_fields == 0 || cfg_.word_fields > kMaxWordFields) throw ConfigError("word_fields out of range");
}

std::size_t Engine::word_bits() const {
  std::size_t lg = topo_.n <= 2 ? 1 : static_cast<std::size_t>(std::bit_width(topo_.n - 1));
  return cfg_.word_fields * lg;
}

void Engine::check_word(const Word& w) const {
  if (w.len > cfg_.word_fields || w.bits() > word_bits()) fault("word exceeds the bandwidth budget");
}

RunResult Engine::run(std::span<NodeProgram* const> programs, std::uint64_t round_limit) {
  const std::size_t n = topo_.n;
  if (programs.size() != n) fault("run: one program per vertex required");
  RunState s;
  s.engine = this;
  s.topo = &topo_;
  s.n = n;
  s.node_root = derive(seed_, "node");
  s.inbox.resize(n);
  s.halted.assign(n, 0);
  s.wake.assign(n, 0);
  s.wake_on_msg.assign(n, 0);
  s.live = n;
  if (topo_.kind == TopologyKind::Congest) {
    s.offset.resize(n + 1, 0);
    for (Vertex v = 0; v < n; ++v) s.offset[v + 1] = s.offset[v] + topo_.graph->degree(v);
    s.links.resize(s.offset[n]);
  } else {
    s.links.resize(n * n);
  }

  RunResult res;
  for (;;) {
    const std::uint64_t r = s.round;
    for (Vertex v = 0; v < n; ++v) {
      if (s.halted[v]) continue;
      if (s.wake[v] > r && !(s.wake_on_msg[v] && !s.inbox[v].empty())) continue;
      s.wake[v] = r + 1;
      s.wake_on_msg[v] = 0;
      NodeContext ctx(&s, v);
      programs[v]->step(ctx);
      s.inbox[v].clear();
    }
    if (s.live == 0 && s.active.empty()) break;
    if (r >= round_limit) {
      res.status = RunStatus::Timeout;
      break;
    }
    if (s.active.empty()) {
      std::uint64_t next = kNever;
      for (Vertex v = 0; v < n; ++v)
        if (!s.halted[v]) next = std::min(next, s.wake[v]);
      if (next == kNever) fault("run: every live node sleeps with no pending message");
      if (next > round_limit) {
        s.round = round_limit;
        res.status = RunStatus::Timeout;
        break;
      }
      if (next > r + 1) {
        s.round = next;
        continue;
      }
    }
    std::vector<std::size_t> still;
    still.reserve(s.active.size());
    for (std::size_t id : s.active) {
      auto& l = s.links[id];
      if (l.last_tx == r) fault("link carried two words in one round");
      l.last_tx = r;
      Vertex src;
      Vertex dst = s.link_target(id, src);
      s.inbox[dst].push_back({src, l.q[l.head++]});
      ++s.m.words_total;
      if (l.head == l.q.size()) {
        l.q.clear();
        l.head = 0;
        l.active = false;
      } else {
        still.push_back(id);
      }
    }
    s.active.swap(still);
    s.round = r + 1;
  }
  s.m.rounds = s.round;
  res.metrics = s.m;
  total_ += s.m;
  return res;
}

std::vector<Word> Engine::broadcast_all(std::span<const Word> values) {
  if (topo_.kind != TopologyKind::Clique) throw ModelError("broadcast_all requires the clique topology");
  const std::size_t n = topo_.n;
  if (values.size() != n) fault("broadcast_all: one value per node required");
  for (const auto& w : values) check_word(w);
  total_.rounds += 1;
  total_.words_total += n * (n - 1);
  total_.primitive_calls += 1;
  total_.peak_link_load = std::max<std::uint64_t>(total_.peak_link_load, n > 1 ? 1 : 0);
  return {values.begin(), values.end()};
}

std::vector<std::vector<Incoming>> Engine::route(std::span<const Message> msgs, RouteOptions opt) {
  if (topo_.kind != TopologyKind::Clique) throw ModelError("route requires the clique topology");
  const std::size_t n = topo_.n;
  if (static_cast<double>(opt.source_input_words) > cfg_.input_factor * static_cast<double>(n))
    throw PreconditionViolation("route: source input exceeds the declared bound");
  std::vector<std::uint64_t> in(n, 0);
  std::vector<std::vector<Incoming>> box(n);
  for (const auto& msg : msgs) {
    if (msg.src >= n || msg.dst >= n) fault("route: endpoint out of range");
    check_word(msg.word);
    ++in[msg.dst];
    box[msg.dst].push_back({msg.src, msg.word});
  }
  std::uint64_t load = 0;
  for (std::size_t v = 0; v < n; ++v) load = std::max(load, in[v]);
  if (static_cast<double>(load) > opt.max_load_factor * static_cast<double>(n))
    throw PreconditionViolation("route: target load " + std::to_string(load) + " exceeds declared bound " +
                                std::to_string(opt.max_load_factor) + "*n");
  std::uint64_t charged = load == 0 ? 0 : cfg_.route_cost * ((load + n - 1) / n);
  total_.rounds += charged;
  total_.charged_routing_rounds += charged;
  total_.words_total += msgs.size();
  total_.primitive_calls += 1;
  for (auto& b : box)
    std::stable_sort(b.begin(), b.end(), [](const Incoming& a, const Incoming& c) { return a.from < c.from; });
  return box;
}

void Engine::charge_rounds(std::uint64_t rounds, std::uint64_t words) {
  total_.rounds += rounds;
  total_.words_total += words;
}

}  // namespace cyclesim
