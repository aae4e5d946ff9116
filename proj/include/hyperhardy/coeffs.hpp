#pragma once

// Closed-form scalar objects: spectral constants, the functions g and g_c,
// unipolar and multipolar Poincare-Hardy potentials, the ceiling constant K,
// Green-function log-gradients and the critical multipolar weights.

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "hyperhardy/hypgeom.hpp"

namespace hyperhardy {

/// (N, lambda, c) with N >= 3, N-2 <= lambda <= (N-1)^2/4 and c > 0.
struct SpectralParams {
  int N = 3;
  double lambda = 1.0;
  double c = 1.0;
  /// Set by make(..., allow_below_window = true) when lambda < N-2 (C < 0).
  bool exploratory = false;

  static SpectralParams make(int N, double lambda, double c = 1.0, bool allow_below_window = false);

  /// Bottom of the L^2 spectrum of -Delta on H^N, (N-1)^2/4 (unit curvature).
  double poincare_constant() const { return 0.25 * (N - 1) * (N - 1); }
  CurvatureModel curvature() const { return CurvatureModel(c); }
};

struct HardyConstants {
  double H = 0.0;
  double C = 0.0;
  double D = 0.0;
};

double gamma(const SpectralParams& params);
HardyConstants hardy_constants(const SpectralParams& params);

/// g(s) = (s coth s - 1) / s^2 on the unit model.
double g_unit(double s);
/// g_c(r) = (r sqrt(c) coth(sqrt(c) r) - 1) / r^2 = c g(sqrt(c) r).
double g_fn(double r, double c = 1.0);
/// c / sinh^2(sqrt(c) r).
double inv_sinh_sq(double r, double c = 1.0);

/// H/r^2 + C c/sinh^2(sqrt(c) r) + D g_c(r): the unipolar potential as a
/// function of the (curvature -c) distance to its pole.
double radial_potential(const SpectralParams& params, double r);

/// M >= 2 pairwise distinct poles and d = half the minimal pairwise distance
/// (unit-model distances).
class PoleConfig {
 public:
  static PoleConfig make(std::vector<Point> poles);

  const std::vector<Point>& poles() const { return poles_; }
  std::size_t size() const { return poles_.size(); }
  int dim() const { return poles_.front().dim(); }
  /// Half the minimal pairwise unit-model distance.
  double d() const { return d_; }
  /// Same quantity on the curvature -c model.
  double d(double c) const { return d_ / std::sqrt(c); }

 private:
  std::vector<Point> poles_;
  double d_ = 0.0;
};

/// Distance on the curvature -c model for points stored on the unit model.
double curved_distance(const Point& x, const Point& y, double c);

double unipolar_potential(const SpectralParams& params, const Point& x0, const Point& x);
double multipolar_potential(const SpectralParams& params, std::span<const Point> poles, const Point& x);

/// K_{N,c}(lambda, d) = H/d^2 + C c/sinh^2(sqrt(c) d/2) + D g_c(d/2).
double ceiling_K(const SpectralParams& params, double d);
/// V_lambda(d): the unipolar potential evaluated at distance d.
double far_bound(const SpectralParams& params, double d);

/// |grad G| / G for the Green function of -Delta on H^N at distance d.
double green_log_gradient(int N, double d);
/// Tail integral of sinh^{1-N} on [d, inf) scaled by sinh^{N-1}(d) (= 1 / ratio).
double green_scaled_tail(int N, double d);

enum class WeightKind { unipolar, multipolar, ffk, green_critical };

struct WeightDescriptor {
  WeightKind kind = WeightKind::green_critical;
  SpectralParams params;
  std::vector<Point> poles;
  /// M+1 convex weights in (0, 1/2]; index 0 belongs to the constant solution.
  std::optional<std::vector<double>> alpha;

  void validate() const;
  /// Poles mapped by `iso`; poles landing on the origin are snapped to it.
  WeightDescriptor moved(const Isometry& iso) const;
};

/// Without alpha: the uniform weight (M+1)^{-2}[sum rho_i^2 + sum_{i<j}(rho_i - rho_j)^2].
/// With alpha: sum_{i<j} alpha_i alpha_j |grad log(u_i/u_j)|^2, u_0 = 1, u_i = G(., y_i).
double critical_weight_W(const WeightDescriptor& descriptor, const Point& x);

/// Multipolar weight of the supersolution inequality used for comparison:
/// (N-2)^2/M^2 sum_{i<j} |grad d_i/d_i - grad d_j/d_j|^2 + (N-2)(N-1)/M sum_k g_c(d_k).
double ffk_weight(const SpectralParams& params, std::span<const Point> poles, const Point& x);

double evaluate_weight(const WeightDescriptor& descriptor, const Point& x);

}  // namespace hyperhardy
