#pragma once

#include <iosfwd>
#include <string>

#include "flowipm/graph.hpp"

namespace flowipm {

// DIMACS max-flow format: "p max <n> <m>", "n <v> s" / "n <v> t",
// "a <u> <v> <cap>" with 1-based vertices.  Comments start with 'c'.
// Throws GraphError on malformed input.
Graph parse_dimacs(std::istream& in);
Graph parse_dimacs_file(const std::string& path);

void write_dimacs(const Graph& g, std::ostream& out);

// Flow file: one "f <edge-index> <value>" line per edge (1-based index in
// input order) followed by "s <value>".
void write_flow(const Vec& f, double value, std::ostream& out);

}  // namespace flowipm
