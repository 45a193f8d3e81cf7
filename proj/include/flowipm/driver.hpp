#pragma once

#include "flowipm/combinatorial.hpp"
#include "flowipm/congestion.hpp"
#include "flowipm/ipm_steps.hpp"
#include "flowipm/trace.hpp"

namespace flowipm {

enum class Method { Ipm, BasicIpm, Dinic };

struct DriverConfig {
  Method method = Method::Ipm;
  double eta_override = -1.0;  // negative: use the schedule
  double C0 = 16.0;
  double center_target = 1e-4;
  long max_iters = 200000;
  // budget fraction of 3m the weights may reach before boosting is skipped
  double budget_guard = 0.99;
};

struct DriverResult {
  Vec flow;              // on the input graph, signed on stored orientations
  long long value = 0;
  long iterations = 0;   // path-following loop iterations
  long boosts = 0;       // iterations that committed a reweighting
  double eta = 0.0;
  double t_interior = 0.0;      // units routed by the interior-point phase
  long long value_augmented = 0;  // units added by the exact finishing phase
};

// Step-size exponent schedule eta = max(0, min(1/2, 1/8 - log_m(U)/4)).
double choose_eta(int m, double U, double override_value = -1.0);

// Full pipeline: direct the graph through the undirected reduction when
// needed, precondition, follow the central path (optionally reweighting to
// spread congestion), then round and finish combinatorially.  The result is
// an exact integral maximum flow.
DriverResult maxflow(const Graph& g, const DriverConfig& cfg = {},
                     Trace* trace = nullptr);

}  // namespace flowipm
