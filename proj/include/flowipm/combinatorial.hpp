#pragma once

#include "flowipm/graph.hpp"

namespace flowipm {

struct MaxflowResult {
  Vec flow;          // per input edge, signed on the stored orientation
  long long value = 0;
};

// Blocking-flow max flow on integral two-sided capacities.
MaxflowResult dinic_maxflow(const Graph& g);

// Shortest-augmenting-path max flow; independent cross-check for dinic.
MaxflowResult edmonds_karp_maxflow(const Graph& g);

// Max flow on the residual network of a feasible integral flow f0; returns
// f0 plus the augmentation.  Used to finish a near-optimal flow exactly.
MaxflowResult dinic_finish(const Graph& g, const Vec& f0);

}  // namespace flowipm
