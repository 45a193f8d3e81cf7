#include "flowipm/driver.hpp"

#include <cmath>
#include <limits>

#include "flowipm/weight_ops.hpp"

namespace flowipm {

double choose_eta(int m, double U, double override_value) {
  if (override_value >= 0.0) return std::min(override_value, 0.5);
  if (m < 2) return 0.0;
  const double log_m_U = std::log(std::max(U, 1.0)) / std::log(double(m));
  return std::max(0.0, std::min(0.5, 0.125 - log_m_U / 4.0));
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Recenters until the coupling norm hits the target, logging each Newton
// step so the quadratic contraction can be audited offline.
IPMPoint center_loop(const Graph& g, IPMPoint p, double target, Trace* trace,
                     long iter, double eta) {
  target = std::max(target, 1e-12);
  double c = coupling_norm(g, p);
  for (int k = 0; k < 10 && c > target; ++k) {
    IPMPoint q = center(g, p);
    const double c2 = coupling_norm(g, q);
    if (trace) {
      TraceRecord rec;
      rec.iter = iter;
      rec.phase = "center";
      rec.m = g.m();
      rec.t = q.t;
      rec.w_l1 = q.w.l1();
      rec.eta = eta;
      rec.coupling_before = c;
      rec.coupling_after = c2;
      rec.coupling = c2;
      trace->add(rec);
    }
    if (c2 >= c && c2 > target)
      throw NumericalBreakdown("recentering stopped contracting");
    p = std::move(q);
    c = c2;
  }
  if (c > target)
    throw NumericalBreakdown("recentering did not reach target " +
                             std::to_string(c));
  return p;
}

struct InteriorOutcome {
  IPMPoint point;
  long iterations = 0;
  long boosts = 0;
};

InteriorOutcome follow_path(const Graph& gp, double eta,
                            const DriverConfig& cfg, Trace* trace) {
  const int m = gp.m();
  const Vec d_vec = chi(gp);
  const double threshold = std::max(1.0, std::pow(double(m), 0.5 - eta));
  const double budget_cap = cfg.budget_guard * 3.0 * m;
  const double m_eta = std::pow(double(m), eta);
  const double m_2eta = std::pow(double(m), -2.0 * eta);
  CongestionOptions copt;
  copt.C0 = cfg.C0;

  InteriorOutcome out;
  out.point = initial_point(gp);
  double t_star_cert = kInf;
  while (out.iterations < cfg.max_iters) {
    IPMPoint& pt = out.point;
    const Vec r = resistances(gp, pt.f, pt.w);
    const ElectricSolution es = electric_flow(gp, r, d_vec);
    const CongestionVector rho = congestion(gp, pt.f, es.flow);
    const double rho2 = weighted_norm(pt.w, rho, 2.0);
    const double rho4 = weighted_norm(pt.w, rho, 4.0);
    const double rho_inf = weighted_norm(pt.w, rho, kInf);
    const double cy = d_vec.dot(pt.y);
    if (cy > 0.0) t_star_cert = std::min(t_star_cert, pt.t + 4.0 * pt.w.l1() / cy);
    const double F_cert = t_star_cert - pt.t;

    // The quadratic coupling penalty 10 delta^2 ||rho||_4^2 stays under 1/40
    // with this constant, well inside the recentering contraction region.
    const double delta_basic =
        std::min(1.0 / (20.0 * rho4), 0.099 / rho_inf);

    // Reweighting pays off when the plain fourth-moment step is smaller than
    // the step the spread-out congestion would allow.  The energy after
    // spreading is at least (100 m^{3 eta} s_max rho_max)^2 by the measured
    // exit checks, which bounds the boosted step from above a priori.
    bool try_boost = cfg.method == Method::Ipm && eta > 0.0 &&
                     pt.w.l1() < budget_cap;
    if (try_boost) {
      const Vec s_min = slack_plus(gp, pt.f).cwiseMin(slack_minus(gp, pt.f));
      const double smax_rho = s_min.cwiseProduct(rho.pairwise_max()).maxCoeff();
      const double rho2_floor =
          std::max(rho2, 100.0 * std::pow(double(m), 3.0 * eta) * smax_rho);
      const double delta_boost_cap = m_eta / (100.0 * rho2_floor);
      try_boost = delta_boost_cap > delta_basic;
    }

    bool committed_boost = false;
    if (try_boost) {
      const CongestionControlResult cc = control_congestion(gp, pt, eta, copt);
      const double delta = m_eta / (100.0 * cc.rho2);
      if (delta > delta_basic) {
        IPMPoint mid = pt;
        mid.w.plus += cc.w_extra.plus;
        mid.w.minus += cc.w_extra.minus;
        IPMPoint stepped = progress_step(gp, mid, delta, &cc.electric);
        const WeightVector reduced =
            reduce_weights(gp, stepped.f, cc.w_extra);
        stepped.w.plus = pt.w.plus + reduced.plus;
        stepped.w.minus = pt.w.minus + reduced.minus;
        std::vector<int> recenter_edges;
        const Vec rho_max = cc.rho.pairwise_max();
        for (int e = 0; e < m; ++e) {
          if (rho_max[e] >= m_2eta * cc.rho2 || cc.r_extra[e] >= r[e])
            recenter_edges.push_back(e);
        }
        const WeightVector pc = perfect_center(gp, stepped, recenter_edges);
        stepped.w.plus += pc.plus;
        stepped.w.minus += pc.minus;
        const double coup = coupling_norm(gp, stepped);
        if (stepped.w.l1() <= budget_cap && coup <= 0.02) {
          if (trace) {
            TraceRecord rec;
            rec.iter = out.iterations;
            rec.phase = "boost";
            rec.m = m;
            rec.t = pt.t;
            rec.delta = delta;
            rec.w_l1 = stepped.w.l1();
            rec.eta = eta;
            rec.rho2 = cc.rho2;
            rec.rho_inf = cc.rho_inf;
            rec.energy = cc.electric.energy;
            rec.W = cc.W;
            rec.d = cc.d;
            rec.g_over_W = cc.g_over_W;
            rec.max_slack_times_rho = cc.max_slack_times_rho;
            rec.r_extra_l1 = cc.r_extra_l1;
            rec.coupling = coup;
            trace->add(rec);
          }
          pt = center_loop(gp, stepped, cfg.center_target, trace,
                           out.iterations, eta);
          committed_boost = true;
          ++out.boosts;
        }
      }
    }

    if (!committed_boost) {
      double delta = delta_basic;
      IPMPoint stepped;
      for (int attempt = 0;; ++attempt) {
        try {
          stepped = progress_step(gp, pt, delta, &es);
          stepped = center_loop(gp, stepped, cfg.center_target, trace,
                                out.iterations, eta);
          break;
        } catch (const NumericalBreakdown&) {
          if (attempt >= 1) throw;
          delta *= 0.5;  // one rejection retry, then give up
        }
      }
      pt = std::move(stepped);
      if (trace) {
        TraceRecord rec;
        rec.iter = out.iterations;
        rec.phase = "iterate";
        rec.m = m;
        rec.t = pt.t;
        rec.F_cert = F_cert;
        rec.delta = delta;
        rec.w_l1 = pt.w.l1();
        rec.coupling = coupling_norm(gp, pt);
        rec.rho2 = rho2;
        rec.rho4 = rho4;
        rec.rho_inf = rho_inf;
        rec.energy = es.energy;
        rec.eta = eta;
        trace->add(rec);
      }
    } else if (trace) {
      TraceRecord rec;
      rec.iter = out.iterations;
      rec.phase = "iterate";
      rec.m = m;
      rec.t = pt.t;
      rec.F_cert = F_cert;
      rec.w_l1 = pt.w.l1();
      rec.coupling = coupling_norm(gp, pt);
      rec.rho2 = rho2;
      rec.rho4 = rho4;
      rec.rho_inf = rho_inf;
      rec.energy = es.energy;
      rec.eta = eta;
      trace->add(rec);
    }

    if (pt.w.l1() > 3.0 * m * (1.0 + 1e-9))
      throw NumericalBreakdown("weight budget exceeded 3m");
    ++out.iterations;

    const double cy2 = d_vec.dot(pt.y);
    if (cy2 > 0.0)
      t_star_cert = std::min(t_star_cert, pt.t + 4.0 * pt.w.l1() / cy2);
    if (t_star_cert - pt.t <= threshold) break;
  }
  if (out.iterations >= cfg.max_iters)
    throw NumericalBreakdown("path following hit the iteration cap");
  return out;
}

}  // namespace

DriverResult maxflow(const Graph& g, const DriverConfig& cfg, Trace* trace) {
  check_graph(g);
  DriverResult res;
  if (cfg.method == Method::Dinic) {
    MaxflowResult mf = dinic_maxflow(g);
    res.flow = mf.flow;
    res.value = mf.value;
    return res;
  }
  const bool directed = !g.undirected();
  // Edges into the source or out of the sink appear only in cycles of a flow
  // decomposition, so they may carry zero in some maximum flow; they would
  // map to self loops under the undirected reduction, so drop them here and
  // reinstate zeros at the end.
  Graph work = g;
  std::vector<int> kept;
  if (directed) {
    work.edges.clear();
    std::vector<double> up, um;
    for (int e = 0; e < g.m(); ++e) {
      if (g.edges[e].head == g.source || g.edges[e].tail == g.sink) continue;
      kept.push_back(e);
      work.edges.push_back(g.edges[e]);
      up.push_back(g.u_plus[e]);
      um.push_back(g.u_minus[e]);
    }
    work.u_plus = Eigen::Map<Vec>(up.data(), static_cast<long>(up.size()));
    work.u_minus = Eigen::Map<Vec>(um.data(), static_cast<long>(um.size()));
  }
  DirectedReduction red;
  const Graph* base = &work;
  if (directed) {
    red = reduce_to_undirected(work);
    base = &red.image;
  }
  if (base->m() == 0) {  // nothing left for the interior phase
    MaxflowResult mf = dinic_maxflow(g);
    res.flow = mf.flow;
    res.value = mf.value;
    return res;
  }
  const Graph gp = precondition(*base);
  double eta = 0.0;
  if (cfg.method == Method::Ipm) {
    if (cfg.eta_override >= 0.0) {
      eta = std::min(cfg.eta_override, 0.5);
    } else {
      eta = choose_eta(gp.m(), gp.max_cap());
      // Reweighting changes the budget by ~m^{1/2+4 eta} U over the run; when
      // that already exceeds m/2 the weight argument cannot hold and the
      // schedule degenerates to the plain method.
      const double budget =
          std::pow(double(gp.m()), 0.5 + 4.0 * eta) * gp.max_cap();
      if (budget > 0.5 * gp.m()) eta = 0.0;
    }
  }
  res.eta = eta;

  InteriorOutcome interior = follow_path(gp, eta, cfg, trace);
  res.iterations = interior.iterations;
  res.boosts = interior.boosts;
  res.t_interior = interior.point.t;

  // peel preconditioning edges; the remainder routes a smaller a-b value
  const Vec f_base = strip_precondition(gp, interior.point.f);
  Vec f_work = directed ? map_flow_back(work, red, f_base) : f_base;
  Vec f_work_int = round_to_integral(work, f_work);
  Vec f_int;
  if (directed) {
    f_int = Vec::Zero(g.m());
    for (size_t i = 0; i < kept.size(); ++i) f_int[kept[i]] = f_work_int[i];
  } else {
    f_int = f_work_int;
  }
  const long long routed =
      static_cast<long long>(std::llround(flow_value(g, f_int, 1e-5)));
  MaxflowResult fin = dinic_finish(g, f_int);
  res.flow = fin.flow;
  res.value = fin.value;
  res.value_augmented = fin.value - routed;
  return res;
}

}  // namespace flowipm
