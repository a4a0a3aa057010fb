#include "cyclesim/edge_list.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cyclesim/errors.hpp"

namespace cyclesim {

Graph read_edge_list(std::istream& in) {
  std::vector<long long> nums;
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        nums.push_back(std::stoll(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ConfigError("edge list: bad token '" + tok + "'");
      }
    }
  }
  if (nums.size() < 2) throw ConfigError("edge list: missing 'n m' header");
  long long n = nums[0], m = nums[1];
  if (n < 1 || m < 0) throw ConfigError("edge list: bad header");
  if (nums.size() != 2 + 2 * static_cast<std::size_t>(m))
    throw ConfigError("edge list: expected " + std::to_string(m) + " edges");
  std::vector<Edge> e;
  for (long long i = 0; i < m; ++i) {
    long long a = nums[2 + 2 * i], b = nums[3 + 2 * i];
    if (a < 0 || b < 0 || a >= n || b >= n) throw ConfigError("edge list: vertex id out of range");
    e.push_back(make_edge(static_cast<Vertex>(a), static_cast<Vertex>(b)));
  }
  return Graph::from_edges(static_cast<std::size_t>(n), e);
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open graph file '" + path + "'");
  return read_edge_list(f);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.n() << ' ' << g.m() << '\n';
  for (auto [a, b] : g.edges()) out << a << ' ' << b << '\n';
}

}  // namespace cyclesim
