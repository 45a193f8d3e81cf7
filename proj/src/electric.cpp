#include "flowipm/electric.hpp"

#include <cmath>
#include <numeric>

namespace flowipm {

Eigen::SparseMatrix<double> build_laplacian(const Graph& g, const Vec& r) {
  if (r.size() != g.m()) throw GraphError("resistance size mismatch");
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(4 * g.m());
  for (int e = 0; e < g.m(); ++e) {
    if (!(r[e] > 0.0) || !std::isfinite(r[e]))
      throw GraphError("resistances must be positive and finite");
    const double c = 1.0 / r[e];
    const int u = g.edges[e].tail, v = g.edges[e].head;
    trip.emplace_back(u, u, c);
    trip.emplace_back(v, v, c);
    trip.emplace_back(u, v, -c);
    trip.emplace_back(v, u, -c);
  }
  Eigen::SparseMatrix<double> lap(g.n, g.n);
  lap.setFromTriplets(trip.begin(), trip.end());
  return lap;
}

Vec incidence_apply(const Graph& g, const Vec& phi) {
  Vec out(g.m());
  for (int e = 0; e < g.m(); ++e)
    out[e] = phi[g.edges[e].head] - phi[g.edges[e].tail];
  return out;
}

Vec incidence_adjoint(const Graph& g, const Vec& f) {
  Vec out = Vec::Zero(g.n);
  for (int e = 0; e < g.m(); ++e) {
    out[g.edges[e].tail] -= f[e];
    out[g.edges[e].head] += f[e];
  }
  return out;
}

LaplacianSolver::LaplacianSolver(const Graph& g, const Vec& r)
    : g_(g), conductance_(r.cwiseInverse()), comp_(g.n, -1) {
  lap_ = build_laplacian(g, r);
  // connected components, then ground the first vertex of each
  std::vector<int> stack;
  for (int v = 0; v < g.n; ++v) {
    if (comp_[v] >= 0) continue;
    comp_[v] = ncomp_;
    stack.push_back(v);
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (Eigen::SparseMatrix<double>::InnerIterator it(lap_, u); it; ++it) {
        if (comp_[it.row()] < 0) {
          comp_[it.row()] = ncomp_;
          stack.push_back(static_cast<int>(it.row()));
        }
      }
    }
    ++ncomp_;
  }
  reduced_.assign(g.n, -1);
  std::vector<char> grounded(ncomp_, 0);
  int k = 0;
  for (int v = 0; v < g.n; ++v) {
    if (!grounded[comp_[v]]) {
      grounded[comp_[v]] = 1;
    } else {
      reduced_[v] = k++;
    }
  }
  std::vector<Eigen::Triplet<double>> trip;
  for (int v = 0; v < g.n; ++v) {
    if (reduced_[v] < 0) continue;
    for (Eigen::SparseMatrix<double>::InnerIterator it(lap_, v); it; ++it) {
      const int u = static_cast<int>(it.row());
      if (reduced_[u] >= 0)
        trip.emplace_back(reduced_[u], reduced_[v], it.value());
    }
  }
  Eigen::SparseMatrix<double> red(k, k);
  red.setFromTriplets(trip.begin(), trip.end());
  chol_.compute(red);
  if (chol_.info() != Eigen::Success)
    throw NumericalBreakdown("laplacian factorization failed");
}

Vec LaplacianSolver::solve(const Vec& demand) const {
  if (demand.size() != g_.n) throw GraphError("demand size mismatch");
  Vec csum = Vec::Zero(ncomp_);
  for (int v = 0; v < g_.n; ++v) csum[comp_[v]] += demand[v];
  const double scale = std::max(1.0, demand.cwiseAbs().maxCoeff());
  for (int c = 0; c < ncomp_; ++c) {
    if (std::abs(csum[c]) > 1e-8 * scale)
      throw GraphError("demand does not balance on a component");
  }
  const int k = static_cast<int>(chol_.rows());
  Vec phi = Vec::Zero(g_.n);
  Vec resid = demand;
  for (int pass = 0; pass < 3; ++pass) {
    Vec rhs(k);
    for (int v = 0; v < g_.n; ++v) {
      if (reduced_[v] >= 0) rhs[reduced_[v]] = resid[v];
    }
    Vec sol = chol_.solve(rhs);
    for (int v = 0; v < g_.n; ++v) {
      if (reduced_[v] >= 0) phi[v] += sol[reduced_[v]];
    }
    resid = demand - lap_ * phi;
    if (resid.cwiseAbs().maxCoeff() <= 1e-14 * scale) break;
  }
  // mean zero on each component
  Vec mean = Vec::Zero(ncomp_), count = Vec::Zero(ncomp_);
  for (int v = 0; v < g_.n; ++v) {
    mean[comp_[v]] += phi[v];
    count[comp_[v]] += 1.0;
  }
  for (int v = 0; v < g_.n; ++v) phi[v] -= mean[comp_[v]] / count[comp_[v]];
  return phi;
}

ElectricSolution electric_flow(const Graph& g, const Vec& r, const Vec& demand) {
  LaplacianSolver solver(g, r);
  ElectricSolution sol;
  sol.phi = solver.solve(demand);
  sol.flow = incidence_apply(g, sol.phi).cwiseQuotient(r);
  sol.energy = flow_energy(r, sol.flow);
  return sol;
}

double flow_energy(const Vec& r, const Vec& f) {
  return f.cwiseAbs2().dot(r);
}

double energy_lower_bound(const Graph& g, const Vec& r, const Vec& demand,
                          const Vec& phi) {
  const double num = demand.dot(phi);
  const Vec dphi = incidence_apply(g, phi);
  const double den = dphi.cwiseAbs2().cwiseQuotient(r).sum();
  if (den <= 0.0) return 0.0;
  return num * num / den;
}

}  // namespace flowipm
