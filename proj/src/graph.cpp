#include "flowipm/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace flowipm {

bool Graph::undirected() const {
  for (int e = 0; e < m(); ++e) {
    if (u_plus[e] != u_minus[e]) return false;
  }
  return true;
}

double Graph::max_cap() const {
  double u = 1.0;
  for (int e = 0; e < m(); ++e) {
    u = std::max({u, u_plus[e], u_minus[e]});
  }
  return u;
}

void check_graph(const Graph& g) {
  if (g.n <= 0) throw GraphError("graph has no vertices");
  if (g.source < 0 || g.source >= g.n || g.sink < 0 || g.sink >= g.n)
    throw GraphError("source/sink out of range");
  if (g.source == g.sink) throw GraphError("source equals sink");
  if (g.u_plus.size() != g.m() || g.u_minus.size() != g.m())
    throw GraphError("capacity vector size mismatch");
  for (int e = 0; e < g.m(); ++e) {
    const Edge& ed = g.edges[e];
    if (ed.tail < 0 || ed.tail >= g.n || ed.head < 0 || ed.head >= g.n)
      throw GraphError("edge endpoint out of range");
    if (ed.tail == ed.head) throw GraphError("self loop");
    if (!(g.u_plus[e] > 0.0)) throw GraphError("nonpositive forward capacity");
    if (g.u_minus[e] < 0.0) throw GraphError("negative backward capacity");
  }
}

double flow_value(const Graph& g, const Vec& f, double tol) {
  Vec excess = Vec::Zero(g.n);
  for (int e = 0; e < g.m(); ++e) {
    excess[g.edges[e].tail] -= f[e];
    excess[g.edges[e].head] += f[e];
  }
  for (int v = 0; v < g.n; ++v) {
    if (v == g.source || v == g.sink) continue;
    if (std::abs(excess[v]) > tol)
      throw GraphError("demand is not of source-sink form: residual " +
                       std::to_string(excess[v]) + " at vertex " +
                       std::to_string(v));
  }
  return excess[g.sink];
}

FlowValidation validate_flow(const Graph& g, const Vec& f, double value,
                             double tol) {
  FlowValidation rep;
  for (int e = 0; e < g.m(); ++e) {
    rep.max_capacity_violation = std::max(
        {rep.max_capacity_violation, f[e] - g.u_plus[e], -g.u_minus[e] - f[e]});
  }
  Vec excess = Vec::Zero(g.n);
  for (int e = 0; e < g.m(); ++e) {
    excess[g.edges[e].tail] -= f[e];
    excess[g.edges[e].head] += f[e];
  }
  excess[g.source] += value;
  excess[g.sink] -= value;
  rep.max_demand_residual = excess.cwiseAbs().maxCoeff();
  rep.ok = rep.max_capacity_violation <= tol && rep.max_demand_residual <= tol;
  return rep;
}

DirectedReduction reduce_to_undirected(const Graph& g) {
  check_graph(g);
  DirectedReduction red;
  Graph& h = red.image;
  h.n = g.n;
  h.source = g.source;
  h.sink = g.sink;
  const int a = g.source, b = g.sink;
  h.edges.reserve(3 * g.edges.size());
  std::vector<double> caps;
  caps.reserve(3 * g.edges.size());
  for (int e = 0; e < g.m(); ++e) {
    const int u = g.edges[e].tail, v = g.edges[e].head;
    const double c = g.u_plus[e];
    red.capacity_sum += c;
    h.edges.push_back({a, v});
    h.edges.push_back({v, u});
    h.edges.push_back({b, u});
    caps.insert(caps.end(), {c, c, c});
  }
  h.u_plus = Eigen::Map<Vec>(caps.data(), static_cast<long>(caps.size()));
  h.u_minus = h.u_plus;
  return red;
}

namespace {

// One positive-amount arc of the difference flow used during back-mapping.
struct Arc {
  int from, to;
  double amount;
  int orig_edge;  // original directed edge when this is a middle arc, else -1
};

}  // namespace

Vec map_flow_back(const Graph& g, const DirectedReduction& red,
                  const Vec& f_img) {
  const Graph& h = red.image;
  if (f_img.size() != h.m()) throw GraphError("flow size mismatch");
  // Difference against the canonical flow that routes c_e along a->v->u->b.
  // Orientation bookkeeping: edge 3e carries +c (a->v), 3e+1 carries +c
  // (v->u), 3e+2 carries -c (on stored orientation (b,u)).
  std::vector<Arc> arcs;
  arcs.reserve(h.m());
  const double scale = std::max(1.0, f_img.cwiseAbs().maxCoeff());
  const double eps = 1e-9 * scale;
  for (int e = 0; e < g.m(); ++e) {
    const double c = g.u_plus[e];
    const int u = g.edges[e].tail, v = g.edges[e].head;
    const double h1 = f_img[3 * e] - c;      // in [-2c, 0], direction v -> a
    const double h2 = f_img[3 * e + 1] - c;  // in [-2c, 0], direction u -> v
    const double h3 = f_img[3 * e + 2] + c;  // in [0, 2c],  direction b -> u
    if (-h1 > eps) arcs.push_back({v, g.source, -h1, -1});
    if (-h2 > eps) arcs.push_back({u, v, -h2, e});
    if (h3 > eps) arcs.push_back({g.sink, u, h3, -1});
  }
  // Walk-based decomposition from the source; cycles encountered on the walk
  // are cancelled, source-sink paths are credited to their middle arcs.
  std::vector<std::vector<int>> out(g.n);
  for (int i = 0; i < static_cast<int>(arcs.size()); ++i)
    out[arcs[i].from].push_back(i);
  std::vector<size_t> cursor(g.n, 0);
  Vec f = Vec::Zero(g.m());
  std::vector<int> path;         // arc indices of the current walk
  std::vector<int> where(g.n, -1);  // position of vertex in current walk
  while (true) {
    path.clear();
    std::fill(where.begin(), where.end(), -1);
    int v = g.source;
    where[v] = 0;
    bool progressed = false;
    while (v != g.sink) {
      while (cursor[v] < out[v].size() &&
             arcs[out[v][cursor[v]]].amount <= eps)
        ++cursor[v];
      if (cursor[v] == out[v].size()) break;  // stuck; leftover is cycles
      const int ai = out[v][cursor[v]];
      const int w = arcs[ai].to;
      if (where[w] >= 0) {
        // Cancel the cycle spanned by path[where[w]..] plus this arc.
        double amt = arcs[ai].amount;
        for (size_t k = where[w]; k < path.size(); ++k)
          amt = std::min(amt, arcs[path[k]].amount);
        arcs[ai].amount -= amt;
        for (size_t k = where[w]; k < path.size(); ++k)
          arcs[path[k]].amount -= amt;
        // Rewind the walk to w.
        while (static_cast<int>(path.size()) > where[w]) {
          where[arcs[path.back()].to] = -1;
          path.pop_back();
        }
        v = w;
        where[w] = static_cast<int>(path.size());
        progressed = true;
        continue;
      }
      path.push_back(ai);
      v = w;
      where[v] = static_cast<int>(path.size());
      progressed = true;
    }
    if (v != g.sink) break;  // no further source-sink path
    double amt = 2.0 * scale;
    for (int ai : path) amt = std::min(amt, arcs[ai].amount);
    for (int ai : path) {
      arcs[ai].amount -= amt;
      if (arcs[ai].orig_edge >= 0) f[arcs[ai].orig_edge] += amt / 2.0;
    }
    if (!progressed) break;
  }
  // Clamp numerical overshoot.
  for (int e = 0; e < g.m(); ++e)
    f[e] = std::clamp(f[e], 0.0, g.u_plus[e]);
  return f;
}

Graph precondition(const Graph& g) {
  check_graph(g);
  Graph gp = g;
  const int m0 = g.m();
  const double cap = 2.0 * g.max_cap();
  gp.precond_begin = m0;
  gp.edges.reserve(2 * m0);
  Vec up(2 * m0), um(2 * m0);
  up.head(m0) = g.u_plus;
  um.head(m0) = g.u_minus;
  for (int k = 0; k < m0; ++k) {
    gp.edges.push_back({g.source, g.sink});
    up[m0 + k] = cap;
    um[m0 + k] = cap;
  }
  gp.u_plus = up;
  gp.u_minus = um;
  return gp;
}

Vec strip_precondition(const Graph& gp, const Vec& f) {
  if (f.size() != gp.m()) throw GraphError("flow size mismatch");
  return f.head(gp.precond_start());
}

Vec round_to_integral(const Graph& g, const Vec& f) {
  const int m = g.m();
  Vec r = f;
  auto frac = [&](int e) { return std::abs(r[e] - std::round(r[e])); };
  const double eps = 1e-9;
  std::vector<std::vector<int>> inc(g.n);
  for (int e = 0; e < m; ++e) {
    inc[g.edges[e].tail].push_back(e);
    inc[g.edges[e].head].push_back(e);
  }
  auto fractional_at = [&](int v, int skip) {
    for (int e : inc[v]) {
      if (e != skip && frac(e) > eps) return e;
    }
    return -1;
  };
  // Every push below moves flow "up" along a walk orientation by the smallest
  // distance that lands some walk edge on an integer.  Because capacities are
  // integral, that distance never crosses a capacity, so feasibility is kept
  // and at least one fractional edge becomes integral per push; integral
  // edges never become fractional.  Walks starting at the source only ever
  // raise the value, and cycle pushes keep it, so the value never drops.
  std::vector<int> pos(g.n, -1);
  for (int guard = 0; guard <= m; ++guard) {
    // Prefer starting at a terminal carrying fractional flow; otherwise all
    // remaining fractional edges lie on cycles.
    int startv = -1;
    if (fractional_at(g.source, -1) >= 0) {
      startv = g.source;
    } else if (fractional_at(g.sink, -1) >= 0) {
      startv = g.sink;
    } else {
      for (int e = 0; e < m; ++e) {
        if (frac(e) > eps) {
          startv = g.edges[e].tail;
          break;
        }
      }
    }
    if (startv < 0) break;
    std::vector<int> chain, sign, verts;
    int cur = startv;
    pos[cur] = 0;
    verts.push_back(cur);
    int cycle_from = -1, endv = -1;
    while (true) {
      const int prev = chain.empty() ? -1 : chain.back();
      const int e = fractional_at(cur, prev);
      if (e < 0) {
        // dead end is only legal at a terminal with integral residual
        if (cur != g.source && cur != g.sink)
          throw NumericalBreakdown("fractional flow is not conserved");
        endv = cur;
        break;
      }
      const int s = (g.edges[e].tail == cur) ? +1 : -1;
      chain.push_back(e);
      sign.push_back(s);
      cur = (s > 0) ? g.edges[e].head : g.edges[e].tail;
      if (pos[cur] >= 0) {
        cycle_from = pos[cur];
        break;
      }
      if (cur != startv && (cur == g.source || cur == g.sink)) {
        endv = cur;
        break;
      }
      pos[cur] = static_cast<int>(verts.size());
      verts.push_back(cur);
    }
    for (int v : verts) pos[v] = -1;
    size_t lo = 0;
    if (cycle_from >= 0) {
      lo = static_cast<size_t>(cycle_from);  // push only around the cycle
    } else if (endv == startv) {
      // walk of length zero cannot happen: fractional_at found an edge
      throw NumericalBreakdown("degenerate rounding walk");
    }
    // Orient pushes so value never decreases: a sink-to-source path is
    // traversed in reverse.
    double dir = 1.0;
    if (cycle_from < 0 && startv == g.sink && endv == g.source) dir = -1.0;
    double delta = 2.0 + g.max_cap();
    for (size_t k = lo; k < chain.size(); ++k) {
      const double x = dir * sign[k] * r[chain[k]];
      delta = std::min(delta, std::ceil(x - eps) - x);
    }
    if (delta <= eps) throw NumericalBreakdown("rounding push stalled");
    for (size_t k = lo; k < chain.size(); ++k) {
      r[chain[k]] += delta * dir * sign[k];
      if (frac(chain[k]) < 1e-6) r[chain[k]] = std::round(r[chain[k]]);
    }
  }
  for (int e = 0; e < m; ++e) {
    if (frac(e) > eps) throw NumericalBreakdown("rounding did not converge");
    r[e] = std::round(r[e]);
  }
  return r;
}

}  // namespace flowipm
