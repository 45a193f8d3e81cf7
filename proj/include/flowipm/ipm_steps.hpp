#pragma once

#include "flowipm/central_path.hpp"
#include "flowipm/electric.hpp"

namespace flowipm {

// Advances (f, y, t) along the electric source-sink flow at the current
// resistances: f += delta * fhat, y += delta * phi, t += delta.  Requires
// delta <= 1/(10 ||rho||_inf); the result of a gamma-coupled input is
// (gamma + 10 delta^2 ||rho||_{w,4}^2)-coupled.  The electric solution may be
// passed in when the caller already has it.
IPMPoint progress_step(const Graph& g, const IPMPoint& p, double delta,
                       const ElectricSolution* precomputed = nullptr);

// One Newton recentering step: adds a circulation, leaves t and w unchanged,
// contracts a gamma-coupled point (gamma <= 1/100) to 10 gamma^2-coupled.
IPMPoint center(const Graph& g, const IPMPoint& p);

struct CenterReport {
  IPMPoint point;
  double coupling = 0.0;
  int steps = 0;
};

// Repeats center() until the coupling norm reaches the target (floored at
// 1e-12) or stops contracting; throws NumericalBreakdown when it diverges.
CenterReport center_fully(const Graph& g, const IPMPoint& p,
                          double target = 1e-12, int max_steps = 8);

}  // namespace flowipm
