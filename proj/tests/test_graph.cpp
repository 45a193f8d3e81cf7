#include <doctest.h>

#include <sstream>

#include "flowipm/combinatorial.hpp"
#include "flowipm/dimacs.hpp"
#include "flowipm/graph.hpp"
#include "oracles.hpp"

using namespace flowipm;

TEST_CASE("dimacs parse basics") {
  std::istringstream in(
      "c comment\n"
      "p max 4 5\n"
      "n 1 s\n"
      "n 4 t\n"
      "a 1 2 3\n"
      "a 1 3 2\n"
      "a 2 3 1\n"
      "a 2 4 2\n"
      "a 3 4 4\n");
  Graph g = parse_dimacs(in);
  CHECK(g.n == 4);
  CHECK(g.m() == 5);
  CHECK(g.source == 0);
  CHECK(g.sink == 3);
  CHECK(g.edges[0].tail == 0);
  CHECK(g.edges[0].head == 1);
  CHECK(g.u_plus[4] == 4.0);
  CHECK(g.u_minus[4] == 0.0);
  CHECK(dinic_maxflow(g).value == 5);
}

TEST_CASE("dimacs parse errors carry line context") {
  auto expect_fail = [](const char* text) {
    std::istringstream in(text);
    CHECK_THROWS_AS(parse_dimacs(in), GraphError);
  };
  expect_fail("a 1 2 3\n");                       // arc before problem line
  expect_fail("p max 2 1\nn 1 s\nn 2 t\n");       // missing arcs
  expect_fail("p max 2 1\nn 1 s\na 1 2 3\n");     // no sink
  expect_fail("p max 2 1\nn 1 s\nn 2 t\na 0 2 3\n");  // vertex out of range
  expect_fail("p max 2 1\nn 1 s\nn 2 t\na 1 2 -3\n"); // negative capacity
  expect_fail("p max 2 2\nn 1 s\nn 2 t\na 1 2 3\na 2 1 1\na 1 2 1\n");  // extra arc
  expect_fail("p min 2 1\nn 1 s\nn 2 t\na 1 2 3\n");  // wrong problem tag
}

TEST_CASE("dimacs round trip") {
  oracles::Rng rng(11);
  Graph g = oracles::random_directed(rng, 9, 24, 16);
  std::ostringstream out;
  write_dimacs(g, out);
  std::istringstream in(out.str());
  Graph h = parse_dimacs(in);
  REQUIRE(h.m() == g.m());
  CHECK(h.n == g.n);
  CHECK(h.source == g.source);
  CHECK(h.sink == g.sink);
  for (int e = 0; e < g.m(); ++e) {
    CHECK(h.edges[e].tail == g.edges[e].tail);
    CHECK(h.edges[e].head == g.edges[e].head);
    CHECK(h.u_plus[e] == g.u_plus[e]);
  }
}

TEST_CASE("flow file format") {
  Vec f(2);
  f << 1.0, -0.5;
  std::ostringstream out;
  write_flow(f, 0.5, out);
  CHECK(out.str() == "f 1 1\nf 2 -0.5\ns 0.5\n");
}

TEST_CASE("flow_value and validate_flow") {
  std::istringstream in("p max 3 2\nn 1 s\nn 3 t\na 1 2 2\na 2 3 2\n");
  Graph g = parse_dimacs(in);
  Vec f(2);
  f << 2.0, 2.0;
  CHECK(flow_value(g, f) == doctest::Approx(2.0));
  auto v = validate_flow(g, f, 2.0, 0.0);
  CHECK(v.ok);
  f[1] = 1.0;  // conservation broken at vertex 2
  CHECK_THROWS_AS(flow_value(g, f), GraphError);
  f << 3.0, 3.0;  // over capacity
  auto bad = validate_flow(g, f, 3.0, 1e-9);
  CHECK_FALSE(bad.ok);
  CHECK(bad.max_capacity_violation == doctest::Approx(1.0));
}

namespace {

// the three-edge gadget degenerates to a self loop on edges entering the
// source or leaving the sink; such edges never help a max flow, the driver
// drops them before reducing and so do we here
flowipm::Graph reducible(const flowipm::Graph& g) {
  flowipm::Graph h;
  h.n = g.n;
  h.source = g.source;
  h.sink = g.sink;
  std::vector<double> caps;
  for (int e = 0; e < g.m(); ++e) {
    if (g.edges[e].head == g.source || g.edges[e].tail == g.sink) continue;
    h.edges.push_back(g.edges[e]);
    caps.push_back(g.u_plus[e]);
  }
  h.u_plus = Eigen::Map<Vec>(caps.data(), long(caps.size()));
  h.u_minus = Vec::Zero(long(caps.size()));
  return h;
}

}  // namespace

TEST_CASE("undirected reduction law 2 t* + sum(c)") {
  oracles::Rng rng(23);
  for (int rep = 0; rep < 40; ++rep) {
    Graph g = reducible(oracles::random_directed(
        rng, 3 + rng.below(10), 4 + rng.below(30), 1 + rng.below(8)));
    if (g.m() == 0) continue;
    auto red = reduce_to_undirected(g);
    REQUIRE(red.image.m() == 3 * g.m());
    CHECK(red.image.undirected());
    long long t_star = dinic_maxflow(g).value;
    long long img = dinic_maxflow(red.image).value;
    CHECK(img == 2 * t_star + (long long)red.capacity_sum);
  }
}

TEST_CASE("map_flow_back recovers a maximum directed flow") {
  oracles::Rng rng(31);
  for (int rep = 0; rep < 40; ++rep) {
    Graph g = reducible(oracles::random_directed(
        rng, 3 + rng.below(10), 4 + rng.below(30), 1 + rng.below(8)));
    if (g.m() == 0) continue;
    auto red = reduce_to_undirected(g);
    auto img = dinic_maxflow(red.image);
    Vec f = map_flow_back(g, red, img.flow);
    long long t_star = dinic_maxflow(g).value;
    CHECK(validate_flow(g, f, double(t_star), 1e-9).ok);
  }
}

TEST_CASE("map_flow_back tolerates non-maximum image flows") {
  // a single saturated middle arc plus idle canonical circulation
  std::istringstream in("p max 2 1\nn 1 s\nn 2 t\na 1 2 3\n");
  Graph g = parse_dimacs(in);
  auto red = reduce_to_undirected(g);
  // canonical zero-point image of f_dir = 0 routes the capacity circulation
  Vec f0(3);
  f0 << 3.0, 3.0, -3.0;
  Vec back = map_flow_back(g, red, f0);
  CHECK(back[0] == doctest::Approx(0.0));
  CHECK(validate_flow(g, back, 0.0, 1e-12).ok);
}

TEST_CASE("preconditioning adds exactly 2 m U to the max flow") {
  oracles::Rng rng(47);
  for (int rep = 0; rep < 12; ++rep) {
    Graph g = oracles::random_undirected(rng, 3 + rng.below(8), 4 + rng.below(20),
                                         1 + rng.below(6));
    Graph gp = precondition(g);
    REQUIRE(gp.m() == 2 * g.m());
    CHECK(gp.precond_start() == g.m());
    long long before = dinic_maxflow(g).value;
    long long after = dinic_maxflow(gp).value;
    long long U = (long long)g.max_cap();
    CHECK(after == before + 2LL * g.m() * U);
    Vec f = dinic_maxflow(gp).flow;
    Vec stripped = strip_precondition(gp, f);
    CHECK(stripped.size() == g.m());
  }
}

TEST_CASE("round_to_integral keeps feasibility and never loses value") {
  oracles::Rng rng(59);
  for (int rep = 0; rep < 60; ++rep) {
    Graph g = oracles::random_undirected(rng, 3 + rng.below(8), 4 + rng.below(24),
                                         1 + rng.below(6));
    // start from a fractional shrink of an integral max flow plus noise-free
    // scaling keeps it feasible
    auto mf = dinic_maxflow(g);
    double lam = rng.uniform(0.3, 0.95);
    Vec f = lam * mf.flow;
    double val = flow_value(g, f);
    Vec fi = round_to_integral(g, f);
    for (int e = 0; e < g.m(); ++e) {
      CHECK(std::abs(fi[e] - std::round(fi[e])) <= 1e-7);
      CHECK(fi[e] <= g.u_plus[e] + 1e-9);
      CHECK(fi[e] >= -g.u_minus[e] - 1e-9);
    }
    double vi = flow_value(g, fi, 1e-7);
    CHECK(vi >= std::floor(val + 1e-9) - 1e-7);
  }
}

TEST_CASE("check_graph rejects malformed graphs") {
  Graph g;
  g.n = 2;
  g.edges = {{0, 0}};
  g.u_plus = Vec::Ones(1);
  g.u_minus = Vec::Zero(1);
  g.source = 0;
  g.sink = 1;
  CHECK_THROWS_AS(check_graph(g), GraphError);  // self loop
  g.edges = {{0, 1}};
  CHECK_NOTHROW(check_graph(g));
  g.sink = 0;
  CHECK_THROWS_AS(check_graph(g), GraphError);  // source == sink
}
