#include "flowipm/combinatorial.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

namespace flowipm {

namespace {

using i64 = long long;

i64 as_integer_cap(double c) {
  const double r = std::round(c);
  if (std::abs(c - r) > 1e-6 || r < 0 || r > 1e15)
    throw GraphError("capacity is not a small nonnegative integer");
  return static_cast<i64>(r);
}

// Arc-pair residual representation: arc 2e is the stored orientation of edge
// e, arc 2e^1 its reverse.  residual(2e) + residual(2e+1) = u_plus + u_minus.
struct Residual {
  int n = 0;
  std::vector<int> head;        // head[a] for arc a
  std::vector<i64> cap;         // residual capacity
  std::vector<std::vector<int>> out;

  explicit Residual(const Graph& g, const Vec* warm = nullptr) : n(g.n) {
    check_graph(g);
    const int m = g.m();
    head.resize(2 * m);
    cap.resize(2 * m);
    out.assign(n, {});
    for (int e = 0; e < m; ++e) {
      const i64 up = as_integer_cap(g.u_plus[e]);
      const i64 um = as_integer_cap(g.u_minus[e]);
      i64 f = 0;
      if (warm) {
        f = static_cast<i64>(std::llround((*warm)[e]));
        if (std::abs((*warm)[e] - static_cast<double>(f)) > 1e-6)
          throw GraphError("warm-start flow is not integral");
        if (f > up || f < -um) throw GraphError("warm-start flow infeasible");
      }
      head[2 * e] = g.edges[e].head;
      head[2 * e + 1] = g.edges[e].tail;
      cap[2 * e] = up - f;
      cap[2 * e + 1] = um + f;
      out[g.edges[e].tail].push_back(2 * e);
      out[g.edges[e].head].push_back(2 * e + 1);
    }
  }

  MaxflowResult extract(const Graph& g) const {
    MaxflowResult res;
    res.flow = Vec::Zero(g.m());
    for (int e = 0; e < g.m(); ++e)
      res.flow[e] = static_cast<double>(as_integer_cap(g.u_plus[e]) - cap[2 * e]);
    res.value = static_cast<i64>(std::llround(flow_value(g, res.flow)));
    return res;
  }
};

}  // namespace

MaxflowResult dinic_maxflow(const Graph& g) {
  return dinic_finish(g, Vec::Zero(g.m()));
}

MaxflowResult dinic_finish(const Graph& g, const Vec& f0) {
  Residual r(g, &f0);
  std::vector<int> level(r.n), it(r.n);
  auto bfs = [&]() {
    std::fill(level.begin(), level.end(), -1);
    std::queue<int> q;
    q.push(g.source);
    level[g.source] = 0;
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int a : r.out[v]) {
        if (r.cap[a] > 0 && level[r.head[a]] < 0) {
          level[r.head[a]] = level[v] + 1;
          q.push(r.head[a]);
        }
      }
    }
    return level[g.sink] >= 0;
  };
  std::function<i64(int, i64)> dfs = [&](int v, i64 pushed) -> i64 {
    if (v == g.sink) return pushed;
    for (int& i = it[v]; i < static_cast<int>(r.out[v].size()); ++i) {
      const int a = r.out[v][i];
      const int w = r.head[a];
      if (r.cap[a] <= 0 || level[w] != level[v] + 1) continue;
      const i64 got = dfs(w, std::min(pushed, r.cap[a]));
      if (got > 0) {
        r.cap[a] -= got;
        r.cap[a ^ 1] += got;
        return got;
      }
    }
    return 0;
  };
  const i64 inf = std::numeric_limits<i64>::max() / 4;
  while (bfs()) {
    std::fill(it.begin(), it.end(), 0);
    while (dfs(g.source, inf) > 0) {
    }
  }
  return r.extract(g);
}

MaxflowResult edmonds_karp_maxflow(const Graph& g) {
  Residual r(g);
  const i64 inf = std::numeric_limits<i64>::max() / 4;
  while (true) {
    std::vector<int> pred_arc(r.n, -1);
    std::vector<char> seen(r.n, 0);
    std::queue<int> q;
    q.push(g.source);
    seen[g.source] = 1;
    while (!q.empty() && !seen[g.sink]) {
      const int v = q.front();
      q.pop();
      for (int a : r.out[v]) {
        if (r.cap[a] > 0 && !seen[r.head[a]]) {
          seen[r.head[a]] = 1;
          pred_arc[r.head[a]] = a;
          q.push(r.head[a]);
        }
      }
    }
    if (!seen[g.sink]) break;
    i64 push = inf;
    for (int v = g.sink; v != g.source;) {
      const int a = pred_arc[v];
      push = std::min(push, r.cap[a]);
      v = r.head[a ^ 1];
    }
    for (int v = g.sink; v != g.source;) {
      const int a = pred_arc[v];
      r.cap[a] -= push;
      r.cap[a ^ 1] += push;
      v = r.head[a ^ 1];
    }
  }
  return r.extract(g);
}

}  // namespace flowipm
