#include "cyclesim/clique_listing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "cyclesim/clique_girth.hpp"
#include "cyclesim/errors.hpp"
#include "cyclesim/turan.hpp"

namespace cyclesim {

std::size_t Partition::part_of(Vertex v) const {
  auto it = std::upper_bound(bounds.begin(), bounds.end(), v);
  return static_cast<std::size_t>(it - bounds.begin()) - 1;
}

double PartitionTree::bound1() const { return kTreeC1 * static_cast<double>(m) / static_cast<double>(x) + n; }

double PartitionTree::bound2(std::size_t d) const {
  auto xd = static_cast<double>(x);
  return kTreeC2 * static_cast<double>(d) * static_cast<double>(m_tilde) / (xd * xd) + n;
}

std::vector<std::pair<Vertex, Vertex>> PartitionTree::chain(std::size_t rank, std::size_t j) const {
  std::vector<std::pair<Vertex, Vertex>> out(p);
  auto node = static_cast<std::int64_t>(leaves.at(rank));
  auto part = static_cast<std::uint32_t>(j);
  while (node >= 0) {
    const auto& nd = nodes[node];
    const auto& P = partitions[nd.partition];
    out[nd.layer] = {P.begin(part), P.end(part)};
    part = nd.parent_part;
    node = nd.parent;
  }
  return out;
}

std::size_t branching(std::size_t n, std::size_t p) {
  auto x = std::llround(std::pow(static_cast<double>(n), 1.0 / static_cast<double>(p)));
  return static_cast<std::size_t>(std::max<long long>(2, x));
}

namespace {

// Within the regime (2^p <= n) every builder and leaf slot is a distinct node. Below it, slots fold
// onto nodes modulo n and the routing bound scales with the fold count.
bool in_regime(std::size_t n, const SubgraphPattern& h) { return h.p < 64 && (std::uint64_t{1} << h.p) <= n; }

std::size_t folds(std::size_t slots, std::size_t n) { return std::max<std::size_t>(1, (slots + n - 1) / n); }

// One broadcast per fold; slot s is announced by node s mod n.
std::vector<Word> broadcast_slots(Engine& e, const std::vector<Word>& slots, std::size_t n) {
  std::vector<Word> out;
  for (std::size_t base = 0; base < slots.size(); base += n) {
    std::vector<Word> vals(n);
    for (std::size_t v = 0; v < n && base + v < slots.size(); ++v) vals[v] = slots[base + v];
    auto all = e.broadcast_all(vals);
    out.insert(out.end(), all.begin(), all.end());
  }
  out.resize(slots.size());
  return out;
}

// Greedy sweep in id order; a new part starts when either counter would pass its threshold.
Partition greedy_parts(std::size_t n, const std::vector<std::int64_t>& c1, double t1, const std::vector<std::int64_t>& c2,
                       double t2) {
  Partition P;
  P.bounds.push_back(0);
  double a = 0, b = 0;
  for (Vertex v = 0; v < n; ++v) {
    double da = static_cast<double>(c1[v]), db = c2.empty() ? 0.0 : static_cast<double>(c2[v]);
    if (v > P.bounds.back() && (a + da > t1 || b + db > t2)) {
      P.bounds.push_back(v);
      a = b = 0;
    }
    a += da;
    b += db;
  }
  P.bounds.push_back(static_cast<Vertex>(n));
  return P;
}

Partition refine(const Partition& m, const Partition& r) {
  Partition out;
  std::set_union(m.bounds.begin(), m.bounds.end(), r.bounds.begin(), r.bounds.end(), std::back_inserter(out.bounds));
  out.bounds.erase(std::unique(out.bounds.begin(), out.bounds.end()), out.bounds.end());
  return out;
}

// Non-decreasing sequences over [0, r) of length 1..len, by length then lexicographically.
std::vector<std::vector<std::uint32_t>> multisets(std::uint32_t r, std::size_t len) {
  std::vector<std::vector<std::uint32_t>> out;
  for (std::size_t l = 1; l <= len && r > 0; ++l) {
    std::vector<std::uint32_t> cur(l, 0);
    for (;;) {
      out.push_back(cur);
      std::int64_t i = static_cast<std::int64_t>(l) - 1;
      while (i >= 0 && cur[i] == r - 1) --i;
      if (i < 0) break;
      ++cur[i];
      for (auto j = static_cast<std::size_t>(i) + 1; j < l; ++j) cur[j] = cur[i];
    }
  }
  return out;
}

// Builders broadcast one part start each; everyone rebuilds the bounds.
Partition read_partition(const std::vector<Word>& all, std::size_t first, std::size_t x, std::size_t n) {
  Partition P;
  for (std::size_t b = first; b < first + x; ++b)
    if (all[b].len > 0) P.bounds.push_back(static_cast<Vertex>(all[b][0]));
  P.bounds.push_back(static_cast<Vertex>(n));
  return P;
}

void announce(std::vector<Word>& slots, const Partition& P, std::size_t first) {
  for (std::size_t j = 0; j < P.parts(); ++j) slots[first + j] = Word{static_cast<std::int64_t>(P.begin(j))};
}

}  // namespace

PartitionTree build_partition_tree(Engine& e, const Graph& g, const SubgraphPattern& h) {
  const std::size_t n = g.n();
  if (h.p == 0) throw ConfigError("pattern has no nodes");
  PartitionTree t;
  t.n = n;
  t.p = h.p;
  t.x = branching(n, h.p);
  t.m = g.m();
  t.m_tilde = std::max<std::uint64_t>(t.m, n * t.x);
  t.h = h;
  const std::size_t x = t.x;
  const bool regime = in_regime(n, h);
  if (regime && x > n) fault("partition tree: branching exceeds n");

  // Root partition R, built by slots [0, x) from everyone's degree.
  std::vector<Message> msgs;
  for (Vertex v = 0; v < n; ++v)
    for (std::size_t b = 0; b < x; ++b)
      msgs.push_back({v, static_cast<Vertex>(b % n), Word{static_cast<std::int64_t>(g.degree(v))}});
  auto box = e.route(msgs, {static_cast<double>(folds(x, n)), g.max_degree()});
  std::vector<std::int64_t> deg(n);
  for (auto& in : box[0]) deg[in.from] = in.word[0];
  Partition R = greedy_parts(n, deg, t.bound1(), {}, 0.0);
  if (R.parts() > x) fault("partition tree: root partition has more than x parts");
  std::vector<Word> slots(x);
  announce(slots, R, 0);
  R = read_partition(broadcast_slots(e, slots, n), 0, x, n);
  t.partitions.push_back(R);
  t.multisets.emplace_back();

  // One refinement per R-part multiset of size 1..p-1, each built by its own block of x slots.
  auto sets = multisets(static_cast<std::uint32_t>(R.parts()), h.p - 1);
  const std::size_t total = (sets.size() + 1) * x;
  if (regime && total > n) fault("partition tree: not enough builder nodes");
  if (!sets.empty()) {
    msgs.clear();
    for (Vertex v = 0; v < n; ++v) {
      std::vector<std::int64_t> per_part(R.parts(), 0);
      for (Vertex u : g.adj(v)) ++per_part[R.part_of(u)];
      for (std::size_t s = 0; s < sets.size(); ++s) {
        std::int64_t sum = 0;
        for (auto q : sets[s]) sum += per_part[q];
        for (std::size_t b = 0; b < x; ++b)
          msgs.push_back({v, static_cast<Vertex>(((s + 1) * x + b) % n),
                          Word{static_cast<std::int64_t>(g.degree(v)), sum, static_cast<std::int64_t>(s)}});
      }
    }
    box = e.route(msgs, {static_cast<double>(folds(total, n)), g.max_degree()});
    slots.assign(total, Word{});
    for (std::size_t s = 0; s < sets.size(); ++s) {
      const std::size_t first = (s + 1) * x;
      std::vector<std::int64_t> d1(n), d2(n);
      for (auto& in : box[first % n]) {
        if (in.word[2] != static_cast<std::int64_t>(s)) continue;
        d1[in.from] = in.word[0];
        d2[in.from] = in.word[1];
      }
      Partition M = refine(greedy_parts(n, d1, t.bound1(), d2, t.bound2(sets[s].size())), R);
      if (M.parts() > x) fault("partition tree: refinement has more than x parts");
      announce(slots, M, first);
    }
    auto all = broadcast_slots(e, slots, n);
    for (std::size_t s = 0; s < sets.size(); ++s) {
      t.partitions.push_back(read_partition(all, (s + 1) * x, x, n));
      t.multisets.push_back(sets[s]);
    }
  }

  // Local assembly: the partition below a path is the one built for the R-parts of its H-neighbors.
  std::map<std::vector<std::uint32_t>, std::uint32_t> index;
  for (std::uint32_t i = 1; i < t.multisets.size(); ++i) index[t.multisets[i]] = i;
  std::vector<std::uint32_t> rpath;
  auto grow = [&](auto&& self, std::uint32_t node) -> void {
    const std::uint32_t layer = t.nodes[node].layer;
    if (layer + 1 == h.p) {
      t.leaves.push_back(node);
      return;
    }
    const Partition& P = t.partitions[t.nodes[node].partition];
    for (std::uint32_t j = 0; j < P.parts(); ++j) {
      rpath.push_back(static_cast<std::uint32_t>(R.part_of(P.begin(j))));
      std::vector<std::uint32_t> key;
      for (std::uint32_t s = 0; s <= layer; ++s)
        if (h.adjacent(layer + 1, s)) key.push_back(rpath[s]);
      std::sort(key.begin(), key.end());
      PartitionTree::Node child;
      child.partition = key.empty() ? 0 : index.at(key);
      child.layer = layer + 1;
      child.parent = node;
      child.parent_part = j;
      auto id = static_cast<std::uint32_t>(t.nodes.size());
      t.nodes.push_back(child);
      t.nodes[node].children.push_back(id);
      self(self, id);
      rpath.pop_back();
    }
  };
  t.nodes.push_back({});
  grow(grow, 0);
  if (regime && t.leaves.size() * x > n) fault("partition tree: leaf count exceeds n/x");
  return t;
}

PartitionTree build_partition_tree(const Graph& g, const SubgraphPattern& h) {
  Engine e(Topology::clique(g), 0);
  return build_partition_tree(e, g, h);
}

TreeAudit audit_tree(const Graph& g, const PartitionTree& t) {
  TreeAudit out;
  const std::size_t n = g.n();
  auto bad = [&](std::string s) { out.violations.push_back(std::move(s)); };
  std::vector<std::uint64_t> deg_prefix(n + 1, 0);
  for (Vertex v = 0; v < n; ++v) deg_prefix[v + 1] = deg_prefix[v] + g.degree(v);
  // Ordered pairs (a in U, b in W) with ab an edge.
  auto cross = [&](std::pair<Vertex, Vertex> U, std::pair<Vertex, Vertex> W) {
    std::uint64_t c = 0;
    for (Vertex a = U.first; a < U.second; ++a)
      for (Vertex b : g.adj(a)) c += b >= W.first && b < W.second;
    return c;
  };
  const Partition& R = t.partitions.at(0);
  if (static_cast<double>(R.parts()) > static_cast<double>(t.x) / 2.0) bad("root partition has more than x/2 parts");
  for (std::size_t i = 0; i < t.partitions.size(); ++i) {
    const auto& P = t.partitions[i];
    if (P.bounds.size() < 2 || P.bounds.front() != 0 || P.bounds.back() != n) bad("partition does not cover V");
    for (std::size_t j = 0; j + 1 < P.bounds.size(); ++j)
      if (P.bounds[j] >= P.bounds[j + 1]) bad("partition has an empty or unordered part");
    if (P.parts() > t.x) bad("partition " + std::to_string(i) + " has more than x parts");
    for (std::size_t j = 0; j < P.parts(); ++j)
      if (R.part_of(P.begin(j)) != R.part_of(P.end(j) - 1)) bad("partition " + std::to_string(i) + " does not refine R");
  }
  auto back = t.h.back_degrees();
  for (std::uint32_t id = 0; id < t.nodes.size(); ++id) {
    const auto& nd = t.nodes[id];
    const auto& P = t.partitions[nd.partition];
    std::vector<std::pair<Vertex, Vertex>> anc(nd.layer);
    auto up = nd.parent;
    auto part = nd.parent_part;
    while (up >= 0) {
      const auto& pn = t.nodes[up];
      anc[pn.layer] = {t.partitions[pn.partition].begin(part), t.partitions[pn.partition].end(part)};
      part = pn.parent_part;
      up = pn.parent;
    }
    for (std::size_t j = 0; j < P.parts(); ++j) {
      ++out.parts_checked;
      std::pair<Vertex, Vertex> U{P.begin(j), P.end(j)};
      double load1 = static_cast<double>(deg_prefix[U.second] - deg_prefix[U.first]);
      if (load1 > t.bound1()) bad("condition 1 fails at tree node " + std::to_string(id));
      std::uint64_t load2 = 0;
      for (std::uint32_t s = 0; s < nd.layer; ++s)
        if (t.h.adjacent(nd.layer, s)) load2 += cross(U, anc[s]);
      if (static_cast<double>(load2) > t.bound2(back[nd.layer]))
        bad("condition 2 fails at tree node " + std::to_string(id));
    }
  }
  return out;
}

std::vector<Instance> list_with_tree(Engine& e, const Graph& g, const SubgraphPattern& h, const PartitionTree& t,
                                     ListingStats* stats) {
  const std::size_t n = g.n();
  if (t.n != n || t.p != h.p || !(t.h.edges == h.edges)) fault("list_with_tree: tree built for another input");
  if (in_regime(n, h) && t.leaves.size() * t.x > n) fault("list_with_tree: leaf count exceeds n/x");
  auto xd = static_cast<double>(t.x);
  const double bound =
      kTreeC2 * static_cast<double>(h.k()) * static_cast<double>(t.m_tilde) / (xd * xd) + static_cast<double>(h.p * n);

  // Slot rank*x + j owns leaf `rank`, part j, and learns E(U_i, U_t) for every pattern edge.
  struct Owner {
    Vertex node;
    std::vector<std::pair<Vertex, Vertex>> chain;
  };
  std::vector<Owner> owners;
  for (std::size_t rank = 0; rank < t.leaves.size(); ++rank) {
    const auto& P = t.partitions[t.nodes[t.leaves[rank]].partition];
    for (std::size_t j = 0; j < P.parts(); ++j)
      owners.push_back({static_cast<Vertex>((rank * t.x + j) % n), t.chain(rank, j)});
  }
  std::vector<Message> msgs;
  std::size_t max_multiset = 0;
  auto inside = [](Vertex v, std::pair<Vertex, Vertex> U) { return v >= U.first && v < U.second; };
  for (const auto& o : owners) {
    std::set<Edge> want;
    std::size_t multiset = 0;
    for (auto [zt, zi] : h.edges) {
      auto Ui = o.chain[zi], Ut = o.chain[zt];
      for (Vertex a = Ui.first; a < Ui.second; ++a)
        for (Vertex b : g.adj(a))
          if (inside(b, Ut)) {
            ++multiset;
            want.insert(make_edge(a, b));
          }
    }
    max_multiset = std::max(max_multiset, multiset);
    if (static_cast<double>(multiset) > bound) fault("list_with_tree: learned edges exceed the load bound");
    for (auto ed : want)
      msgs.push_back({ed.first, o.node, Word{ed.first, ed.second, static_cast<std::int64_t>(&o - owners.data())}});
  }
  const auto fold = static_cast<double>(folds(t.leaves.size() * t.x, n));
  auto box = e.route(msgs, {fold * bound / static_cast<double>(n), g.max_degree()});
  if (stats) *stats = {max_multiset, bound};

  std::set<Instance> found;
  for (const auto& o : owners) {
    std::unordered_map<Vertex, std::vector<Vertex>> adj;
    std::set<Edge> have;
    for (auto& in : box[o.node]) {
      if (in.word[2] != &o - owners.data()) continue;
      auto a = static_cast<Vertex>(in.word[0]), b = static_cast<Vertex>(in.word[1]);
      adj[a].push_back(b);
      adj[b].push_back(a);
      have.insert(make_edge(a, b));
    }
    std::vector<Vertex> map(h.p);
    auto place = [&](auto&& self, std::size_t i) -> void {
      if (i == h.p) {
        found.insert(make_instance(h, map));
        return;
      }
      auto U = o.chain[i];
      std::vector<Vertex> cand;
      std::optional<std::size_t> anchor;
      for (std::size_t s = 0; s < i && !anchor; ++s)
        if (h.adjacent(i, s)) anchor = s;
      if (anchor) {
        auto it = adj.find(map[*anchor]);
        if (it == adj.end()) return;
        for (Vertex c : it->second)
          if (inside(c, U)) cand.push_back(c);
      } else {
        for (Vertex c = U.first; c < U.second; ++c) cand.push_back(c);
      }
      for (Vertex c : cand) {
        bool ok = true;
        for (std::size_t s = 0; s < i && ok; ++s) {
          if (map[s] == c) ok = false;
          else if (h.adjacent(i, s) && !have.count(make_edge(c, map[s]))) ok = false;
        }
        if (!ok) continue;
        map[i] = c;
        self(self, i + 1);
      }
    };
    place(place, 0);
  }
  return {found.begin(), found.end()};
}

ListingReport list_subgraph(Engine& e, const Graph& g, const SubgraphPattern& h) {
  const std::uint64_t before = e.metrics().rounds;
  ListingReport rep;
  rep.tree = build_partition_tree(e, g, h);
  rep.instances = list_with_tree(e, g, h, rep.tree, &rep.stats);
  rep.metrics = e.metrics();
  const double n = static_cast<double>(g.n()), p = static_cast<double>(h.p);
  const double cap =
      kListCost * (static_cast<double>(h.k()) * static_cast<double>(rep.tree.m_tilde) / std::pow(n, 1.0 + 2.0 / p) + p);
  if (static_cast<double>(e.metrics().rounds - before) > cap) fault("list_subgraph: round bound exceeded");
  return rep;
}

ListingReport list_subgraph(const Graph& g, const SubgraphPattern& h) {
  Engine e(Topology::clique(g), 0);
  return list_subgraph(e, g, h);
}

std::string C2kResult::str() const {
  switch (kind) {
    case Kind::Found:
      return "Found(" + std::to_string(witness->length()) + ")";
    case Kind::GuaranteedExists:
      return "GuaranteedExists";
    case Kind::Free:
      return "Free";
  }
  return "?";
}

C2kResult detect_c2k(const Graph& g, std::uint32_t k) {
  if (k < 2) throw ConfigError("detect_c2k: k must be at least 2");
  C2kResult out;
  Engine e(Topology::clique(g), 0);
  if (turan_c2k_gate(g.n(), g.m(), k)) {
    out.kind = C2kResult::Kind::GuaranteedExists;
    return out;
  }
  auto rep = list_subgraph(e, g, SubgraphPattern::cycle(2 * k));
  out.metrics = e.metrics();
  if (!rep.instances.empty()) {
    out.kind = C2kResult::Kind::Found;
    out.witness = CycleWitness{rep.instances.front().map};
    if (!validate_witness(g, *out.witness, 2 * k)) fault("detect_c2k: listed cycle does not validate");
  }
  return out;
}

ExactGirthReport exact_girth_sparse(const Graph& g, std::uint32_t lower) {
  const std::size_t n = g.n();
  Engine e(Topology::clique(g), 0);
  ExactGirthReport out;
  auto finish = [&](std::optional<CycleWitness> w) {
    if (w) {
      if (!validate_witness(g, *w)) fault("exact_girth_sparse: witness does not validate");
      if (w->length() <= lower)
        throw PreconditionViolation("exact_girth_sparse: found a cycle of length " + std::to_string(w->length()) +
                                    " <= " + std::to_string(lower));
      out.girth = Girth::of(static_cast<std::uint32_t>(w->length()));
    } else {
      out.girth = Girth::infinite();
    }
    out.witness = std::move(w);
    out.metrics = e.metrics();
    return out;
  };
  const double load = std::max(1.0, std::ceil(static_cast<double>(g.m()) / static_cast<double>(n)));
  auto k = girth_turan_k(n, g.m());
  if (!k) {
    out.path = "gather";
    return finish(shortest_cycle(gather_all(e, g, load)));
  }

  // Lengths beyond the listing regime (2^len > n) are decided on the gathered graph.
  out.path = "listing";
  std::optional<Graph> whole;
  auto cycle_of = [&](std::size_t len) -> std::optional<CycleWitness> {
    if ((std::uint64_t{1} << len) <= n) {
      auto rep = list_subgraph(e, g, SubgraphPattern::cycle(len));
      if (rep.instances.empty()) return std::nullopt;
      return CycleWitness{rep.instances.front().map};
    }
    if (!whole) {
      whole = gather_all(e, g, load);
      out.path = "listing+gather";
    }
    return find_cycle_of_length(*whole, len);
  };
  for (std::size_t len = 3; len <= 2 * *k; ++len)
    if (auto w = cycle_of(len)) return finish(std::move(w));
  if (auto w = cycle_of(2 * *k + 1)) return finish(std::move(w));
  auto w = cycle_of(2 * *k + 2);
  if (!w) fault("exact_girth_sparse: no cycle up to the density bound");
  return finish(std::move(w));
}

}  // namespace cyclesim
