#pragma once

// One-dimensional quadrature rules shared by the radial integrators.

#include <functional>
#include <vector>

namespace hyperhardy {

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
const Rule1D& gauss_legendre(int n);

/// Tanh-sinh rule on [0, h] clustered at 0, truncated where nodes fall below
/// `floor`. Integrates endpoint algebraic singularities r^p (p > -1).
Rule1D tanh_sinh_origin(double h, int levels, double floor = 1e-200);

/// Adaptive Gauss-Kronrod (7/15) on [a, b] with interval bisection.
double adaptive_gauss_kronrod(const std::function<double(double)>& f, double a, double b, double rel_tol,
                              double abs_tol = 0.0, int max_depth = 40);

}  // namespace hyperhardy
