#include "flowipm/congestion.hpp"

#include "flowipm/weight_ops.hpp"

#include <cmath>
#include <limits>

namespace flowipm {

namespace {

struct ObjEval {
  double value = 0.0;
  Vec grad;
  Vec hess_diag;   // diagonal part, without the 2R term
  Vec rank1_h;     // rank-one direction (homogeneous form)
  double rank1_beta = 0.0;
};

double pow_int(double x, int k) {
  double v = 1.0;
  for (int i = 0; i < k; ++i) v *= x;
  return v;
}

ObjEval evaluate(const SmoothedProblem& prob, const Vec& f, bool with_hess) {
  const int P = prob.P;
  if (P < 2 || P % 2 != 0) throw GraphError("norm index must be even, >= 2");
  const long m = f.size();
  ObjEval ev;
  const double quad = f.cwiseAbs2().dot(prob.r);
  double S = 0.0;
  Vec fP1(m);  // f^{P-1}
  Vec fP2(m);  // f^{P-2}
  for (long e = 0; e < m; ++e) {
    const double x = f[e];
    const double xP2 = pow_int(x, P - 2);
    fP2[e] = xP2;
    fP1[e] = xP2 * x;
    S += xP2 * x * x;
  }
  ev.grad = 2.0 * prob.r.cwiseProduct(f);
  if (with_hess) ev.hess_diag = Vec::Zero(m);
  if (prob.form == SmoothedForm::PPower) {
    ev.value = quad + prob.coeff * S;
    ev.grad += (prob.coeff * P) * fP1;
    if (with_hess) ev.hess_diag = (prob.coeff * P * (P - 1)) * fP2;
    return ev;
  }
  // homogeneous: coeff * S^{2/P}
  const double norm2 = (S > 0.0) ? std::pow(S, 2.0 / P) : 0.0;
  ev.value = quad + prob.coeff * norm2;
  if (S > 0.0) {
    const double s1 = std::pow(S, 2.0 / P - 1.0);
    ev.grad += (2.0 * prob.coeff * s1) * fP1;
    if (with_hess) {
      ev.hess_diag = (2.0 * (P - 1) * prob.coeff * s1) * fP2;
      // negative rank-one curvature of the norm composition; the full
      // Hessian stays positive definite because ||.||_P^2 is convex
      ev.rank1_h = fP1;
      ev.rank1_beta = (4.0 - 2.0 * P) * prob.coeff * std::pow(S, 2.0 / P - 2.0);
    }
  }
  return ev;
}

}  // namespace

SmoothedSolution solve_smoothed(const Graph& g, const SmoothedProblem& prob,
                                double tol, int max_iters, const Vec* warm) {
  if (prob.r.size() != g.m() || prob.demand.size() != g.n)
    throw GraphError("size mismatch");
  if (!(prob.coeff >= 0.0)) throw GraphError("negative norm coefficient");
  Vec f = warm ? *warm : electric_flow(g, prob.r, prob.demand).flow;
  SmoothedSolution out;
  ObjEval ev = evaluate(prob, f, true);
  for (int it = 0; it < max_iters; ++it) {
    // quadratic model resistances; the 2R floor keeps them positive
    const Vec M = 2.0 * prob.r + ev.hess_diag;
    LaplacianSolver solver(g, M);
    auto constrained_solve = [&](const Vec& v) -> Vec {
      const Vec lambda = solver.solve(incidence_adjoint(g, v.cwiseQuotient(M)));
      return (v - incidence_apply(g, lambda)).cwiseQuotient(M);
    };
    Vec step = constrained_solve(-ev.grad);
    if (ev.rank1_beta != 0.0) {
      const Vec kb = constrained_solve(ev.rank1_h);
      const double denom = 1.0 + ev.rank1_beta * ev.rank1_h.dot(kb);
      if (denom > 1e-12) {
        step -= (ev.rank1_beta * ev.rank1_h.dot(step) / denom) * kb;
      }
    }
    const double decrement = -ev.grad.dot(step);
    out.decrement = decrement;
    if (decrement <= tol * std::max(1.0, std::abs(ev.value))) break;
    double alpha = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      ObjEval trial = evaluate(prob, f + alpha * step, false);
      if (trial.value <= ev.value - 0.25 * alpha * decrement) {
        f += alpha * step;
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved) break;
    ev = evaluate(prob, f, true);
    out.newton_steps = it + 1;
  }
  out.flow = f;
  out.objective = ev.value;
  return out;
}

SmoothedSolution homogeneous_via_binary_search(const Graph& g, const Vec& r,
                                               const Vec& demand, double W,
                                               int P, double rel_tol) {
  if (W == 0.0) {
    SmoothedProblem direct{r, demand, SmoothedForm::Homogeneous, 0.0, P};
    return solve_smoothed(g, direct);
  }
  // Oracle: x_C = argmin f^T R f + C ||f||_P^P.  x_C also minimizes
  // f^T R f + W ||f||_P^2 exactly when C equals the derivative match
  // (2W/P) * S(x_C)^{2/P - 1}; the mapped budget w(C) below is increasing.
  Vec warm = electric_flow(g, r, demand).flow;
  auto mapped = [&](double C, Vec* flow_out) {
    SmoothedProblem prob{r, demand, SmoothedForm::PPower, C, P};
    SmoothedSolution sol = solve_smoothed(g, prob, 1e-13, 200, &warm);
    warm = sol.flow;
    if (flow_out) *flow_out = sol.flow;
    double S = 0.0;
    for (long e = 0; e < sol.flow.size(); ++e) S += pow_int(sol.flow[e], P);
    if (S <= 0.0) return std::numeric_limits<double>::infinity();
    // W implied by C: solve C = (2W/P) S^{2/P-1}
    return C * (P / 2.0) * std::pow(S, 1.0 - 2.0 / P);
  };
  double lo = 1e-12, hi = 1.0;
  while (mapped(lo, nullptr) > W && lo > 1e-300) lo *= 1e-3;
  while (mapped(hi, nullptr) < W && hi < 1e300) hi *= 8.0;
  Vec flow;
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    const double w_mid = mapped(mid, &flow);
    if (std::abs(w_mid - W) <= rel_tol * W) {
      lo = hi = mid;
      break;
    }
    (w_mid < W ? lo : hi) = mid;
    if (hi / lo < 1.0 + 1e-14) break;
  }
  const double C = std::sqrt(lo * hi);
  SmoothedProblem oracle{r, demand, SmoothedForm::PPower, C, P};
  SmoothedSolution sol = solve_smoothed(g, oracle, 1e-13, 200, &warm);
  // report the homogeneous objective for comparability
  SmoothedProblem target{r, demand, SmoothedForm::Homogeneous, W, P};
  sol.objective = evaluate(target, sol.flow, false).value;
  return sol;
}

EnergyMaximizeResult energy_maximize(const Graph& g, const Vec& r,
                                     const Vec& demand, double W, int p,
                                     double tol) {
  if (p < 1) throw GraphError("p must be >= 1");
  if (W < 0.0) throw GraphError("negative budget");
  EnergyMaximizeResult res;
  ElectricSolution base = electric_flow(g, r, demand);
  res.energy_before = base.energy;
  res.r_extra = Vec::Zero(g.m());
  if (base.energy <= 1e-14 || W == 0.0) {
    res.flow = base.flow;
    res.energy_after = base.energy;
    res.objective = base.energy;
    res.phi_after = base.phi;
    return res;
  }
  SmoothedProblem prob{r, demand, SmoothedForm::Homogeneous, W, 2 * p};
  SmoothedSolution sol = solve_smoothed(g, prob, tol, 300, &base.flow);
  res.flow = sol.flow;
  res.objective = sol.objective;
  // r' = W (f*)^{2(p-1)} / ||f*^2||_p^{p-1}; then ||r'||_q = W for the dual q
  const Vec v = sol.flow.cwiseAbs2();
  double S = 0.0;
  for (long e = 0; e < v.size(); ++e) S += pow_int(v[e], p);
  if (S > 0.0) {
    const double denom = std::pow(S, (p - 1.0) / p);
    for (long e = 0; e < v.size(); ++e)
      res.r_extra[e] = W * pow_int(v[e], p - 1) / denom;
  }
  ElectricSolution after = electric_flow(g, r + res.r_extra, demand);
  res.energy_after = after.energy;
  res.phi_after = after.phi;
  return res;
}

double eval_g(const Graph& g, const Vec& r, const Vec& demand, double W, int p) {
  EnergyMaximizeResult res = energy_maximize(g, r, demand, W, p);
  if (res.energy_before <= 0.0) throw GraphError("zero base energy");
  return std::log(res.energy_after) - std::log(res.energy_before);
}

int congestion_norm_index(int m) {
  const int base = std::max(2, static_cast<int>(std::ceil(
                                   std::sqrt(std::log(std::max(m, 2))))));
  return base + (base % 2);
}

CongestionControlResult control_congestion(const Graph& g, const IPMPoint& pt,
                                           double eta,
                                           const CongestionOptions& opt) {
  if (eta < 0.0) throw GraphError("negative eta");
  const int m = g.m();
  const Vec r = resistances(g, pt.f, pt.w);
  const Vec d_vec = chi(g);
  CongestionControlResult res;
  res.d = std::pow(static_cast<double>(m), -6.0 * eta) / 20000.0;
  res.p = congestion_norm_index(m) / 2;
  const double mh = std::pow(static_cast<double>(m), -eta);
  const double mh3 = std::pow(static_cast<double>(m), -3.0 * eta);
  double C0 = opt.C0;
  std::string last_err;
  for (int attempt = 0; attempt <= opt.max_doublings; ++attempt) {
    res.doublings = attempt;
    res.W = C0 / res.d * std::log(std::max(static_cast<double>(m), 2.0));
    EnergyMaximizeResult em =
        energy_maximize(g, r, d_vec, res.W, res.p, opt.tol);
    res.r_extra = em.r_extra;
    res.r_extra_l1 = em.r_extra.lpNorm<1>();
    res.g_over_W =
        (std::log(std::max(em.energy_after, 1e-300)) -
         std::log(std::max(em.energy_before, 1e-300))) /
        res.W;
    if (res.g_over_W >= res.d) {
      last_err = "energy gain per budget did not drop under d";
      C0 *= 2.0;
      continue;
    }
    res.w_extra = compute_weights(g, pt.f, em.r_extra);
    WeightVector w_new{pt.w.plus + res.w_extra.plus,
                       pt.w.minus + res.w_extra.minus};
    const Vec r_new = resistances(g, pt.f, w_new);
    res.electric = electric_flow(g, r_new, d_vec);
    res.rho = congestion(g, pt.f, res.electric.flow);
    res.rho2 = weighted_norm(w_new, res.rho, 2.0);
    res.rho_inf = weighted_norm(w_new, res.rho,
                                std::numeric_limits<double>::infinity());
    const Vec smax = slack_plus(g, pt.f)
                         .cwiseMin(slack_minus(g, pt.f))
                         .cwiseProduct(res.rho.pairwise_max());
    res.max_slack_times_rho = smax.maxCoeff();
    const double slack = 1.0 + opt.check_slack;
    const bool ok_inf = res.rho_inf <= mh * res.rho2 * slack;
    const bool ok_smax =
        res.max_slack_times_rho <= 0.01 * mh3 * res.rho2 * slack;
    if (ok_inf && ok_smax) return res;
    last_err = "measured congestion checks failed: rho_inf=" +
               std::to_string(res.rho_inf) + " vs " +
               std::to_string(mh * res.rho2) +
               ", s*rho=" + std::to_string(res.max_slack_times_rho) + " vs " +
               std::to_string(0.01 * mh3 * res.rho2);
    C0 *= 2.0;
  }
  throw NumericalBreakdown("control_congestion: " + last_err);
}

}  // namespace flowipm
