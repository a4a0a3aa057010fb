#include "cyclesim/pattern.hpp"

#include <algorithm>
#include <sstream>

#include "cyclesim/errors.hpp"

namespace cyclesim {

std::vector<std::size_t> SubgraphPattern::back_degrees() const {
  std::vector<std::size_t> d(p, 0);
  for (auto [a, b] : edges) ++d[std::max(a, b)];
  return d;
}

bool SubgraphPattern::adjacent(std::size_t i, std::size_t j) const {
  auto e = make_edge(static_cast<Vertex>(i), static_cast<Vertex>(j));
  return std::find(edges.begin(), edges.end(), e) != edges.end();
}

SubgraphPattern SubgraphPattern::cycle(std::size_t len) {
  if (len < 3) throw ConfigError("cycle pattern needs >= 3 nodes");
  SubgraphPattern h{"C" + std::to_string(len), len, {}};
  for (std::size_t i = 0; i < len; ++i)
    h.edges.push_back(make_edge(static_cast<Vertex>(i), static_cast<Vertex>((i + 1) % len)));
  std::sort(h.edges.begin(), h.edges.end());
  return h;
}

SubgraphPattern SubgraphPattern::path(std::size_t nodes) {
  if (nodes < 2) throw ConfigError("path pattern needs >= 2 nodes");
  SubgraphPattern h{"P" + std::to_string(nodes), nodes, {}};
  for (std::size_t i = 0; i + 1 < nodes; ++i)
    h.edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(i + 1));
  return h;
}

SubgraphPattern SubgraphPattern::complete(std::size_t nodes) {
  if (nodes < 2) throw ConfigError("clique pattern needs >= 2 nodes");
  SubgraphPattern h{"K" + std::to_string(nodes), nodes, {}};
  for (std::size_t i = 0; i < nodes; ++i)
    for (std::size_t j = i + 1; j < nodes; ++j) h.edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(j));
  return h;
}

SubgraphPattern SubgraphPattern::parse(const std::string& spec) {
  if (spec.size() >= 2 && (spec[0] == 'K' || spec[0] == 'C' || spec[0] == 'P') &&
      std::all_of(spec.begin() + 1, spec.end(), ::isdigit)) {
    std::size_t v = std::stoul(spec.substr(1));
    if (spec[0] == 'K') return complete(v);
    if (spec[0] == 'C') return cycle(v);
    return path(v);
  }
  const std::string prefix = "edges:";
  if (spec.rfind(prefix, 0) != 0) throw ConfigError("unknown pattern '" + spec + "'");
  SubgraphPattern h{spec, 0, {}};
  std::stringstream ss(spec.substr(prefix.size()));
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto dash = item.find('-');
    if (dash == std::string::npos) throw ConfigError("bad pattern edge '" + item + "'");
    auto a = static_cast<Vertex>(std::stoul(item.substr(0, dash)));
    auto b = static_cast<Vertex>(std::stoul(item.substr(dash + 1)));
    if (a == b) throw ConfigError("pattern self-loop");
    h.edges.push_back(make_edge(a, b));
    h.p = std::max<std::size_t>(h.p, std::max(a, b) + 1);
  }
  std::sort(h.edges.begin(), h.edges.end());
  h.edges.erase(std::unique(h.edges.begin(), h.edges.end()), h.edges.end());
  if (h.edges.empty()) throw ConfigError("empty pattern");
  return h;
}

}  // namespace cyclesim
