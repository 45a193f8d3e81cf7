#include "flowipm/ipm_steps.hpp"

#include <cmath>
#include <limits>

namespace flowipm {

namespace {

void check_resistance_drift(const Graph& g, const IPMPoint& before,
                            const IPMPoint& after) {
  const Vec r0 = resistances(g, before.f, before.w);
  const Vec r1 = resistances(g, after.f, after.w);
  const double lo = (r1.cwiseQuotient(r0)).minCoeff();
  const double hi = (r1.cwiseQuotient(r0)).maxCoeff();
  if (lo < 0.5 / (1.0 + 1e-9) || hi > 2.0 * (1.0 + 1e-9))
    throw NumericalBreakdown("resistances moved by more than a factor 2");
}

}  // namespace

IPMPoint progress_step(const Graph& g, const IPMPoint& p, double delta,
                       const ElectricSolution* precomputed) {
  if (delta < 0.0) throw GraphError("negative step");
  const Vec r = resistances(g, p.f, p.w);
  ElectricSolution local;
  if (!precomputed) {
    local = electric_flow(g, r, chi(g));
    precomputed = &local;
  }
  const CongestionVector rho = congestion(g, p.f, precomputed->flow);
  const double rho_inf =
      weighted_norm(p.w, rho, std::numeric_limits<double>::infinity());
  if (delta * rho_inf > 0.1 * (1.0 + 1e-9))
    throw GraphError("step exceeds 1/(10 ||rho||_inf)");
  IPMPoint q = p;
  q.f += delta * precomputed->flow;
  q.y += delta * precomputed->phi;
  q.t += delta;
  check_resistance_drift(g, p, q);
  return q;
}

IPMPoint center(const Graph& g, const IPMPoint& p) {
  const Vec r = resistances(g, p.f, p.w);
  const Vec gv = gaps(g, p);
  LaplacianSolver solver(g, r);
  const Vec rhs = incidence_adjoint(g, gv.cwiseQuotient(r));
  const Vec dy = -solver.solve(rhs);
  const Vec df = (incidence_apply(g, dy) + gv).cwiseQuotient(r);
  IPMPoint q = p;
  q.f += df;
  q.y += dy;
  check_resistance_drift(g, p, q);
  return q;
}

CenterReport center_fully(const Graph& g, const IPMPoint& p, double target,
                          int max_steps) {
  target = std::max(target, 1e-12);
  CenterReport rep{p, coupling_norm(g, p), 0};
  while (rep.coupling > target && rep.steps < max_steps) {
    IPMPoint q = center(g, rep.point);
    const double c = coupling_norm(g, q);
    if (c >= rep.coupling && c > target)
      throw NumericalBreakdown("recentering stopped contracting at " +
                               std::to_string(c));
    rep.point = std::move(q);
    rep.coupling = c;
    ++rep.steps;
  }
  if (rep.coupling > target)
    throw NumericalBreakdown("recentering did not reach target");
  return rep;
}

}  // namespace flowipm
