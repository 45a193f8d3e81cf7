#pragma once

#include "flowipm/graph.hpp"

namespace flowipm {

struct WeightVector {
  Vec plus, minus;
  double l1() const { return plus.lpNorm<1>() + minus.lpNorm<1>(); }
  static WeightVector ones(int m) {
    return {Vec::Ones(m), Vec::Ones(m)};
  }
};

// A candidate central-path point: flow, vertex duals, barrier weights, and
// the path parameter t (the flow routes t units source -> sink).
struct IPMPoint {
  Vec f, y;
  WeightVector w;
  double t = 0.0;
};

IPMPoint initial_point(const Graph& g);  // f = y = 0, w = 1, t = 0

// Unit source-sink demand vector 1_sink - 1_source.
Vec chi(const Graph& g);

Vec slack_plus(const Graph& g, const Vec& f);   // u_plus - f
Vec slack_minus(const Graph& g, const Vec& f);  // u_minus + f

// Throws NumericalBreakdown when any slack drops under 1e-12 * U.
void check_interior(const Graph& g, const Vec& f);

// V(f) = -sum_e (w+ log(u+ - f) + w- log(u- + f))
double barrier_value(const Graph& g, const Vec& f, const WeightVector& w);

// Hessian diagonal of the barrier: r = w+/s+^2 + w-/s-^2 (>= 1/min(s)^2
// whenever w >= 1).
Vec resistances(const Graph& g, const Vec& f, const WeightVector& w);

// Centrality gaps g_e = [B y]_e - (w+/s+ - w-/s-).
Vec gaps(const Graph& g, const IPMPoint& p);

// || gaps ||_{R^{-1}}; a point is gamma-coupled when this is <= gamma and
// B^T f = t * chi.
double coupling_norm(const Graph& g, const IPMPoint& p);

// Largest demand-residual entry of |B^T f - t chi|.
double demand_residual(const Graph& g, const Vec& f, double t);

struct CongestionVector {
  Vec plus, minus;  // |fhat| / s+ and |fhat| / s-
  Vec pairwise_max() const { return plus.cwiseMax(minus); }
};

CongestionVector congestion(const Graph& g, const Vec& f, const Vec& fhat);

// ( sum_e w+ rho+^k + w- rho-^k )^{1/k}; pass k = infinity for the max,
// which lower-bounds the weighted version because w >= 1.
double weighted_norm(const WeightVector& w, const CongestionVector& rho,
                     double k);

}  // namespace flowipm
