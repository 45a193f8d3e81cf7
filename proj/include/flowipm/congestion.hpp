#pragma once

#include "flowipm/central_path.hpp"
#include "flowipm/electric.hpp"

namespace flowipm {

// min_{B^T f = demand} f^T R f + coeff * ||f||_P^2   (Homogeneous)
// min_{B^T f = demand} f^T R f + coeff * ||f||_P^P   (PPower)
// with an even norm index P >= 2.
enum class SmoothedForm { Homogeneous, PPower };

struct SmoothedProblem {
  Vec r;
  Vec demand;
  SmoothedForm form = SmoothedForm::Homogeneous;
  double coeff = 0.0;
  int P = 4;
};

struct SmoothedSolution {
  Vec flow;
  double objective = 0.0;
  double decrement = 0.0;  // final squared Newton decrement
  int newton_steps = 0;
};

// Projection-Newton over the constraint set: each step solves the local
// quadratic model restricted to circulations through one Laplacian
// factorization (plus a rank-one correction for the homogeneous form).
SmoothedSolution solve_smoothed(const Graph& g, const SmoothedProblem& prob,
                                double tol = 1e-12, int max_iters = 200,
                                const Vec* warm = nullptr);

// Same homogeneous minimizer reached through the scalarization detour:
// bisection over the p-power coefficient C until C matches the derivative of
// the norm term at the oracle's solution.
SmoothedSolution homogeneous_via_binary_search(const Graph& g, const Vec& r,
                                               const Vec& demand, double W,
                                               int P, double rel_tol = 1e-9);

struct EnergyMaximizeResult {
  Vec r_extra;           // argmax of electric energy over ||r'||_q <= W, r' >= 0
  Vec flow;              // smoothed-problem minimizer certifying optimality
  double energy_before = 0.0;
  double energy_after = 0.0;   // electric energy at r + r_extra
  double objective = 0.0;      // smoothed minimum; equals energy_after at opt
  Vec phi_after;               // dual certificate potentials at r + r_extra
};

// Budgeted energy boost (q dual to p): maximize the electric energy of the
// demand over resistance increases of bounded l_q norm, by solving the
// smoothed l_2-l_{2p} problem and reading the increase off the minimizer.
EnergyMaximizeResult energy_maximize(const Graph& g, const Vec& r,
                                     const Vec& demand, double W, int p,
                                     double tol = 1e-12);

// g_q(W) = log E_{r + r'(W)} - log E_r; concave in W, g_q(W)/W decreasing.
double eval_g(const Graph& g, const Vec& r, const Vec& demand, double W, int p);

struct CongestionOptions {
  double C0 = 16.0;        // budget multiplier, doubled while the exit test fails
  int max_doublings = 10;
  double tol = 1e-12;      // smoothed-solver tolerance
  double check_slack = 1e-6;  // relative slack on the measured post-checks
};

struct CongestionControlResult {
  WeightVector w_extra;
  Vec r_extra;
  ElectricSolution electric;   // demand flow at the boosted weights
  CongestionVector rho;
  double rho2 = 0.0, rho_inf = 0.0;
  double max_slack_times_rho = 0.0;
  double W = 0.0, d = 0.0, g_over_W = 0.0;
  double r_extra_l1 = 0.0;
  int p = 2;
  int doublings = 0;
};

// Reweights the point so the demand's congestion is spread out:
// ||rho||_inf <= m^-eta ||rho||_{w',2} and
// s_e max(rho+,rho-) <= (1/100) m^-3eta ||rho||_{w',2} on every edge,
// measured at w + w_extra.  Throws NumericalBreakdown when the measured
// checks fail after all budget doublings.
CongestionControlResult control_congestion(const Graph& g, const IPMPoint& pt,
                                           double eta,
                                           const CongestionOptions& opt = {});

// Norm index schedule: p = smallest even integer >= max(2, ceil(sqrt(ln m))).
int congestion_norm_index(int m);

}  // namespace flowipm
