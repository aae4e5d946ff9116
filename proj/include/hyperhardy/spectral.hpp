#pragma once

// Radial eigenproblem for -Delta - lambda - V on a geodesic ball B(x0, R) with
// Dirichlet data on the sphere: piecewise-linear finite elements for the form
//   Q[u] = int_0^R (u'^2 - lambda u^2 - V u^2) s_c(r)^{N-1} dr
// against the mass form int_0^R u^2 s_c(r)^{N-1} dr.
//
// The first node sits at half the first step and u is constant on [0, r_1],
// so V is never evaluated at the origin.

#include <functional>
#include <vector>

#include "hyperhardy/coeffs.hpp"

namespace hyperhardy {

struct RadialProblem {
  SpectralParams params;
  std::function<double(double)> potential;  ///< V(r), r a curvature -c distance; empty means 0
  double outer_radius = 10.0;
  int grid_size = 4096;
  bool graded = true;  ///< geometric clustering towards r = 0 (ratio 1.05)

  void validate() const;

  /// (1 + epsilon) times the unipolar potential of `params`.
  static RadialProblem unipolar(const SpectralParams& params, double outer_radius, int grid_size,
                                double epsilon = 0.0);
};

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  ///< off[i] couples i and i+1
};

struct AssembledForms {
  Tridiagonal A;  ///< form of u'^2 - lambda u^2 - V u^2
  Tridiagonal B;  ///< weighted mass
  std::vector<double> nodes;
};

/// Free nodes r_1 < ... < r_n of the grid on (0, R); R itself is the Dirichlet node.
std::vector<double> radial_grid(double outer_radius, int grid_size, bool graded);

AssembledForms assemble(const RadialProblem& problem);

struct EigenResult {
  double bottom_eigenvalue = 0.0;
  std::vector<double> eigenvector;  ///< B-normalized
  double residual = 0.0;            ///< |A v - theta B v| / (|A| |v| + |theta| |B| |v|)
  int iterations = 0;
};

/// Number of eigenvalues of the pencil (A, B) below theta (LDL^T inertia).
int count_below(const AssembledForms& forms, double theta);

EigenResult bottom_eigenvalue(const AssembledForms& forms);
EigenResult bottom_eigenvalue(const RadialProblem& problem);

}  // namespace hyperhardy
