#pragma once

// Integration over geodesic balls of the curvature -c model in polar
// coordinates: deterministic composite radial rules tensored with spherical
// Monte Carlo. Singular radial behavior is always handled by the radial rule
// about the singular center; only angular dependence is sampled.
//
// Integrands that need full accuracy near a center are evaluated in that
// center's local frame (a boost moving the center to the origin), which keeps
// distances to the center exact even at radii far below machine epsilon
// relative to the global coordinates.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hyperhardy/hypgeom.hpp"
#include "hyperhardy/rules.hpp"

namespace hyperhardy {

struct QuadratureSpec {
  int radial_nodes = 8;        ///< Gauss-Legendre nodes per panel (>= 8)
  int panels = 4;              ///< minimum number of radial panels
  int spherical_samples = 64;  ///< directions per radial node (>= 64)
  std::uint64_t seed = 1;
  Point center = Point::origin(3);
  double radius = 1.0;         ///< in curvature -c units
  int origin_levels = 3;       ///< tanh-sinh refinement on the innermost panel

  void validate() const;
};

struct IntegralEstimate {
  double value = 0.0;
  double stderr = 0.0;
  std::uint64_t samples_used = 0;
};

struct VectorEstimate {
  std::vector<double> value;
  std::vector<double> stderr;
  std::uint64_t samples_used = 0;

  IntegralEstimate component(std::size_t i) const { return {value.at(i), stderr.at(i), samples_used}; }
};

/// Caps the number of worker threads used by the integrators (>= 1).
/// Results do not depend on this setting.
void set_worker_threads(int n);
int worker_threads();

/// Radial nodes/weights on [0, radius]: tanh-sinh on the innermost panel,
/// Gauss-Legendre elsewhere; one panel per unit of sqrt(c) r (at least
/// spec.panels) plus the given breakpoints.
Rule1D radial_rule(const QuadratureSpec& spec, double radius, double sqrt_c, std::span<const double> breakpoints = {});

/// omega_{N-1} * int_0^R f(r) s_c(r)^{N-1} dr; stderr = 0.
IntegralEstimate integrate_radial(const std::function<double(double)>& f, const QuadratureSpec& spec, int dim,
                                  const CurvatureModel& curvature);

/// Integral of f over B(spec.center, spec.radius).
IntegralEstimate integrate_ball(const std::function<double(const Point&)>& f, const QuadratureSpec& spec,
                                const CurvatureModel& curvature);

/// Integrand evaluated in a center's local frame: `local` is the sample point
/// after the center has been moved to the origin and `r` its exact
/// (curvature -c) distance to the center. Writes one value per component.
using LocalEvaluator = std::function<void(const Point& local, double r, std::span<double> out)>;
/// Builds a LocalEvaluator for the frame given by `to_local`.
using FrameBinder = std::function<LocalEvaluator(const Isometry& to_local)>;

/// Adapts a scalar field given in global coordinates.
FrameBinder global_field(std::function<double(const Point&)> f);

struct PoleTerm {
  Point pole = Point::origin(3);
  double radius = 1.0;                   ///< support radius about the pole
  std::function<double(double)> radial;  ///< singular radial factor; empty means 1
  FrameBinder cofactor;
  std::vector<double> breakpoints;       ///< radii where the integrand has kinks
};

/// Sum over terms of int_{B(pole, radius)} radial(d(x, pole)) cofactor(x) dv,
/// each term in polar coordinates about its own pole. Every term ball must lie
/// inside B(spec.center, spec.radius).
VectorEstimate decompose_by_pole(std::span<const PoleTerm> terms, std::size_t components, const QuadratureSpec& spec,
                                 const CurvatureModel& curvature);
IntegralEstimate decompose_by_pole(std::span<const PoleTerm> terms, const QuadratureSpec& spec,
                                   const CurvatureModel& curvature);

/// A center of a smooth multi-center partition of unity.
struct Cell {
  Point center = Point::origin(3);
  double reach = 1.0;  ///< radius about the center covering the integrand support
  std::vector<double> breakpoints;
};

/// Integrates a field whose singularities sit at the cell centers: the field is
/// split with smooth weights w_c (sum_c w_c = 1, w_c = 1 to high order at c)
/// and each piece is integrated about its own center.
VectorEstimate integrate_cells(std::span<const Cell> cells, std::size_t components, const FrameBinder& field,
                               const QuadratureSpec& spec, const CurvatureModel& curvature);

/// Smooth cell weights at a point given its distances to all centers and the
/// pairwise center distances (row-major K x K).
void cell_weights(std::span<const double> dist, std::span<const double> center_dist, std::span<double> weights);

}  // namespace hyperhardy
