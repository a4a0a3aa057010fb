#pragma once

#include <iosfwd>
#include <string>

#include "cyclesim/graph.hpp"

namespace cyclesim {

// "n m" header, then m lines "u v"; '#' starts a comment.
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace cyclesim
