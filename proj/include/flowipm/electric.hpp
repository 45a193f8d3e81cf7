#pragma once

#include <Eigen/Sparse>
#include <memory>
#include <vector>

#include "flowipm/graph.hpp"

namespace flowipm {

Eigen::SparseMatrix<double> build_laplacian(const Graph& g, const Vec& r);

// [B phi]_e = phi[head] - phi[tail] and its adjoint.
Vec incidence_apply(const Graph& g, const Vec& phi);
Vec incidence_adjoint(const Graph& g, const Vec& f);

// Direct solver for L = B^T R^{-1} B with one grounded vertex per connected
// component.  Potentials are returned mean-zero on each component.
class LaplacianSolver {
 public:
  LaplacianSolver(const Graph& g, const Vec& r);

  // Solves L phi = demand.  Throws GraphError when the demand does not sum
  // to zero on some component (relative tolerance).
  Vec solve(const Vec& demand) const;

  const std::vector<int>& component() const { return comp_; }
  int num_components() const { return ncomp_; }

 private:
  const Graph& g_;
  Vec conductance_;
  std::vector<int> comp_;
  int ncomp_ = 0;
  std::vector<int> reduced_;  // vertex -> reduced index, -1 when grounded
  Eigen::SparseMatrix<double> lap_;  // full Laplacian, for refinement
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol_;
};

struct ElectricSolution {
  Vec flow;
  Vec phi;
  double energy = 0.0;
};

// Minimum-energy flow with demand d: f = R^{-1} B L^+ d.  One refinement
// pass keeps the demand residual near machine precision.
ElectricSolution electric_flow(const Graph& g, const Vec& r, const Vec& demand);

double flow_energy(const Vec& r, const Vec& f);

// Dual certificate: any potentials phi with demand^T phi != 0 prove
// E >= (demand^T phi)^2 / (phi^T L phi), tight at the true potentials.
double energy_lower_bound(const Graph& g, const Vec& r, const Vec& demand,
                          const Vec& phi);

}  // namespace flowipm
