#include "flowipm/dimacs.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace flowipm {

Graph parse_dimacs(std::istream& in) {
  Graph g;
  bool have_problem = false;
  long declared_m = 0;
  std::vector<double> caps;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    auto fail = [&](const std::string& why) {
      throw GraphError("dimacs line " + std::to_string(lineno) + ": " + why);
    };
    if (tag == "c") continue;
    if (tag == "p") {
      std::string kind;
      long n = 0, m = 0;
      if (!(ls >> kind >> n >> m) || kind != "max") fail("expected 'p max n m'");
      if (have_problem) fail("duplicate problem line");
      if (n <= 0 || m < 0) fail("bad sizes");
      have_problem = true;
      g.n = static_cast<int>(n);
      declared_m = m;
    } else if (tag == "n") {
      long v = 0;
      std::string role;
      if (!have_problem) fail("node line before problem line");
      if (!(ls >> v >> role)) fail("expected 'n v s|t'");
      if (v < 1 || v > g.n) fail("node id out of range");
      if (role == "s") {
        if (g.source >= 0) fail("duplicate source");
        g.source = static_cast<int>(v - 1);
      } else if (role == "t") {
        if (g.sink >= 0) fail("duplicate sink");
        g.sink = static_cast<int>(v - 1);
      } else {
        fail("node role must be s or t");
      }
    } else if (tag == "a") {
      long u = 0, v = 0;
      double c = 0;
      if (!have_problem) fail("arc line before problem line");
      if (!(ls >> u >> v >> c)) fail("expected 'a u v cap'");
      if (u < 1 || u > g.n || v < 1 || v > g.n) fail("arc endpoint out of range");
      if (u == v) fail("self loop");
      if (!(c > 0)) fail("capacity must be positive");
      g.edges.push_back({static_cast<int>(u - 1), static_cast<int>(v - 1)});
      caps.push_back(c);
    } else {
      fail("unknown line tag '" + tag + "'");
    }
  }
  if (!have_problem) throw GraphError("dimacs: missing problem line");
  if (g.source < 0 || g.sink < 0) throw GraphError("dimacs: missing source or sink");
  if (declared_m != static_cast<long>(caps.size()))
    throw GraphError("dimacs: arc count does not match problem line");
  g.u_plus = Eigen::Map<Vec>(caps.data(), static_cast<long>(caps.size()));
  g.u_minus = Vec::Zero(g.m());
  check_graph(g);
  return g;
}

Graph parse_dimacs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open " + path);
  return parse_dimacs(in);
}

void write_dimacs(const Graph& g, std::ostream& out) {
  out << "p max " << g.n << " " << g.m() << "\n";
  out << "n " << g.source + 1 << " s\n";
  out << "n " << g.sink + 1 << " t\n";
  out << std::setprecision(17);
  for (int e = 0; e < g.m(); ++e) {
    out << "a " << g.edges[e].tail + 1 << " " << g.edges[e].head + 1 << " "
        << g.u_plus[e] << "\n";
  }
}

void write_flow(const Vec& f, double value, std::ostream& out) {
  out << std::setprecision(17);
  for (long e = 0; e < f.size(); ++e) out << "f " << e + 1 << " " << f[e] << "\n";
  out << "s " << value << "\n";
}

}  // namespace flowipm
