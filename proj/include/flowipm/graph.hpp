#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace flowipm {

using Vec = Eigen::VectorXd;

// Malformed input, infeasible request, contract violation by the caller.
struct GraphError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The solver lost an invariant it cannot recover from (conditioning, divergence).
struct NumericalBreakdown : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Edge {
  int tail = -1;
  int head = -1;
};

// Flow network with two-sided capacities: a feasible flow satisfies
// -u_minus[e] <= f[e] <= u_plus[e].  A directed edge has u_minus = 0,
// an undirected edge has u_plus = u_minus.
struct Graph {
  int n = 0;
  std::vector<Edge> edges;
  Vec u_plus;
  Vec u_minus;
  int source = -1;
  int sink = -1;
  // First index of the preconditioning a-b edges, m() if none were added.
  int precond_begin = -1;

  int m() const { return static_cast<int>(edges.size()); }
  int precond_start() const { return precond_begin < 0 ? m() : precond_begin; }
  bool undirected() const;
  double max_cap() const;  // largest capacity magnitude, >= 1 for nonempty graphs
};

// Structural validation: vertex ids in range, no self loops, u_plus > 0,
// u_minus >= 0, source/sink set and distinct.  Throws GraphError.
void check_graph(const Graph& g);

// Net flow into the sink.  Throws GraphError if the demand residual B^T f is
// nonzero (beyond tol) at any vertex other than source/sink.
double flow_value(const Graph& g, const Vec& f, double tol = 1e-6);

struct FlowValidation {
  double max_capacity_violation = 0.0;
  double max_demand_residual = 0.0;
  bool ok = false;
};

// Checks -u_minus - tol <= f <= u_plus + tol and that B^T f equals
// value * (1_sink - 1_source) within tol.
FlowValidation validate_flow(const Graph& g, const Vec& f, double value,
                             double tol);

// Directed -> undirected reduction: every directed edge e=(u,v) of capacity c
// becomes three undirected capacity-c edges (a,v), (v,u), (b,u), stored
// consecutively at indices 3e, 3e+1, 3e+2.  max flow of the image equals
// 2 t* + sum of capacities.
struct DirectedReduction {
  Graph image;
  double capacity_sum = 0.0;
};
DirectedReduction reduce_to_undirected(const Graph& g);

// Recovers a feasible flow on the original directed graph from a feasible
// a-b flow on the reduction image.  The recovered value is
// (flow_value(image, f_img) - capacity_sum) / 2 up to rounding of leftover
// cycles.  Works for any feasible f_img, not just maximum ones.
Vec map_flow_back(const Graph& g, const DirectedReduction& red,
                  const Vec& f_img);

// Appends m parallel undirected source-sink edges of capacity 2U.
// Raises the max flow by exactly 2 m U and makes the zero point centered.
Graph precondition(const Graph& g);

// Drops the preconditioning coordinates of a flow vector.
Vec strip_precondition(const Graph& gp, const Vec& f);

// Rounds a feasible fractional flow to an integral feasible flow whose value
// is >= floor(value(f)).  Requires integral capacities.
Vec round_to_integral(const Graph& g, const Vec& f);

}  // namespace flowipm
