#include "flowipm/weight_ops.hpp"

namespace flowipm {

WeightVector compute_weights(const Graph& g, const Vec& f, const Vec& r_extra) {
  if (r_extra.size() != g.m()) throw GraphError("size mismatch");
  check_interior(g, f);
  const Vec sp = slack_plus(g, f), sm = slack_minus(g, f);
  WeightVector w{Vec::Zero(g.m()), Vec::Zero(g.m())};
  for (int e = 0; e < g.m(); ++e) {
    if (r_extra[e] < 0.0) throw GraphError("negative resistance increase");
    if (r_extra[e] == 0.0) continue;
    if (sp[e] <= sm[e]) {
      w.plus[e] = r_extra[e] * sp[e] * sp[e];
      w.minus[e] = w.plus[e] * sm[e] / sp[e];
    } else {
      w.minus[e] = r_extra[e] * sm[e] * sm[e];
      w.plus[e] = w.minus[e] * sp[e] / sm[e];
    }
  }
  return w;
}

WeightVector reduce_weights(const Graph& g, const Vec& f, const WeightVector& w) {
  check_interior(g, f);
  const Vec sp = slack_plus(g, f), sm = slack_minus(g, f);
  WeightVector out{Vec::Zero(g.m()), Vec::Zero(g.m())};
  for (int e = 0; e < g.m(); ++e) {
    if (w.plus[e] < 0.0 || w.minus[e] < 0.0)
      throw GraphError("weights must be nonnegative");
    const double grad = w.plus[e] / sp[e] - w.minus[e] / sm[e];
    if (grad >= 0.0) {
      out.plus[e] = grad * sp[e];
    } else {
      out.minus[e] = -grad * sm[e];
    }
  }
  return out;
}

WeightVector perfect_center(const Graph& g, const IPMPoint& p,
                            const std::vector<int>& edges) {
  const Vec gv = gaps(g, p);
  const Vec sp = slack_plus(g, p.f), sm = slack_minus(g, p.f);
  WeightVector out{Vec::Zero(g.m()), Vec::Zero(g.m())};
  for (int e : edges) {
    if (e < 0 || e >= g.m()) throw GraphError("edge index out of range");
    if (gv[e] >= 0.0) {
      out.plus[e] = sp[e] * gv[e];
    } else {
      out.minus[e] = -sm[e] * gv[e];
    }
  }
  return out;
}

}  // namespace flowipm
