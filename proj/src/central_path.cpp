#include "flowipm/central_path.hpp"

#include <cmath>
#include <limits>

namespace flowipm {

IPMPoint initial_point(const Graph& g) {
  IPMPoint p;
  p.f = Vec::Zero(g.m());
  p.y = Vec::Zero(g.n);
  p.w = WeightVector::ones(g.m());
  p.t = 0.0;
  return p;
}

Vec chi(const Graph& g) {
  Vec d = Vec::Zero(g.n);
  d[g.source] = -1.0;
  d[g.sink] = 1.0;
  return d;
}

Vec slack_plus(const Graph& g, const Vec& f) { return g.u_plus - f; }
Vec slack_minus(const Graph& g, const Vec& f) { return g.u_minus + f; }

void check_interior(const Graph& g, const Vec& f) {
  const double margin = 1e-12 * g.max_cap();
  for (int e = 0; e < g.m(); ++e) {
    if (g.u_plus[e] - f[e] < margin || g.u_minus[e] + f[e] < margin)
      throw NumericalBreakdown("flow left the strict interior at edge " +
                               std::to_string(e));
  }
}

double barrier_value(const Graph& g, const Vec& f, const WeightVector& w) {
  check_interior(g, f);
  double v = 0.0;
  for (int e = 0; e < g.m(); ++e) {
    v -= w.plus[e] * std::log(g.u_plus[e] - f[e]);
    v -= w.minus[e] * std::log(g.u_minus[e] + f[e]);
  }
  return v;
}

Vec resistances(const Graph& g, const Vec& f, const WeightVector& w) {
  check_interior(g, f);
  const Vec sp = slack_plus(g, f), sm = slack_minus(g, f);
  return w.plus.cwiseQuotient(sp.cwiseAbs2()) +
         w.minus.cwiseQuotient(sm.cwiseAbs2());
}

Vec gaps(const Graph& g, const IPMPoint& p) {
  check_interior(g, p.f);
  const Vec sp = slack_plus(g, p.f), sm = slack_minus(g, p.f);
  Vec out(g.m());
  for (int e = 0; e < g.m(); ++e) {
    out[e] = (p.y[g.edges[e].head] - p.y[g.edges[e].tail]) -
             (p.w.plus[e] / sp[e] - p.w.minus[e] / sm[e]);
  }
  return out;
}

double coupling_norm(const Graph& g, const IPMPoint& p) {
  const Vec gv = gaps(g, p);
  const Vec r = resistances(g, p.f, p.w);
  return std::sqrt(gv.cwiseAbs2().cwiseQuotient(r).sum());
}

double demand_residual(const Graph& g, const Vec& f, double t) {
  Vec excess = Vec::Zero(g.n);
  for (int e = 0; e < g.m(); ++e) {
    excess[g.edges[e].tail] -= f[e];
    excess[g.edges[e].head] += f[e];
  }
  excess[g.source] += t;
  excess[g.sink] -= t;
  return excess.cwiseAbs().maxCoeff();
}

CongestionVector congestion(const Graph& g, const Vec& f, const Vec& fhat) {
  check_interior(g, f);
  const Vec a = fhat.cwiseAbs();
  return {a.cwiseQuotient(slack_plus(g, f)),
          a.cwiseQuotient(slack_minus(g, f))};
}

double weighted_norm(const WeightVector& w, const CongestionVector& rho,
                     double k) {
  if (std::isinf(k)) {
    double m = 0.0;
    if (rho.plus.size() > 0)
      m = std::max(rho.plus.maxCoeff(), rho.minus.maxCoeff());
    return m;
  }
  if (k < 1.0) throw GraphError("norm index must be >= 1 or infinity");
  const double s = (w.plus.array() * rho.plus.array().pow(k) +
                    w.minus.array() * rho.minus.array().pow(k))
                       .sum();
  return std::pow(s, 1.0 / k);
}

}  // namespace flowipm
