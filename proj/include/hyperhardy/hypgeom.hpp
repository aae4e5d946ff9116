#pragma once

// Hyperboloid model of the hyperbolic space H^N (curvature -1).
//
// A point is stored by its N+1 ambient Minkowski coordinates, time-like
// component first, with <x,x>_L = -1 and x_0 >= 1. Curvature -c is realized by
// rescaling the unit model: every c-dependent quantity depends on c only
// through sqrt(c) * distance.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hyperhardy {

inline constexpr int kMaxDim = 16;

class Point {
 public:
  using Storage = std::array<double, kMaxDim + 1>;

  /// Base point (1, 0, ..., 0) of H^N.
  static Point origin(int dim);
  /// Lifts spatial coordinates onto the hyperboloid (x_0 recomputed).
  static Point from_spatial(std::span<const double> spatial);
  /// Accepts full ambient coordinates; rejects points far from the hyperboloid
  /// and renormalizes the rest.
  static Point from_ambient(std::span<const double> coords);
  /// exp_origin(r * direction); direction is normalized internally.
  static Point polar(double r, std::span<const double> direction);

  int dim() const { return dim_; }
  std::span<const double> coords() const { return {data_.data(), static_cast<std::size_t>(dim_) + 1}; }
  std::span<const double> spatial() const { return {data_.data() + 1, static_cast<std::size_t>(dim_)}; }
  double operator[](std::size_t i) const { return data_[i]; }

  /// |<x,x>_L + 1| / x_0^2 (relative hyperboloid defect).
  double hyperboloid_defect() const;

 private:
  Point() = default;
  friend Point renormalized(const Storage&, int);
  int dim_ = 0;
  Storage data_{};
};

/// Tangent vector at `base`, stored in ambient coordinates.
class TangentVector {
 public:
  TangentVector(const Point& base, std::span<const double> components);

  const Point& base() const { return base_; }
  std::span<const double> components() const { return {data_.data(), static_cast<std::size_t>(base_.dim()) + 1}; }
  double operator[](std::size_t i) const { return data_[i]; }

  TangentVector scaled(double s) const;
  TangentVector operator+(const TangentVector& other) const;
  TangentVector operator-(const TangentVector& other) const;

 private:
  Point base_;
  Point::Storage data_{};
};

/// Sectional curvature identically -c.
struct CurvatureModel {
  double c = 1.0;

  explicit CurvatureModel(double curvature = 1.0);

  double sqrt_c() const;
  /// s_c(r) = sinh(sqrt(c) r) / sqrt(c).
  double warp(double r) const;
  /// Polar volume density s_c(r)^{N-1}.
  double volume_factor(int dim, double r) const;
};

double minkowski_inner(std::span<const double> a, std::span<const double> b);

/// Geodesic distance on the unit model. Rounding below the hyperboloid floor
/// is clamped to zero and counted in numeric_warning_count().
double geodesic_distance(const Point& x, const Point& y);

std::uint64_t numeric_warning_count();
void reset_numeric_warning_count();

/// Riemannian gradient of d(., z) at x; unit length, pointing away from z.
TangentVector grad_dist(const Point& x, const Point& z);

/// Ambient components of grad d(., z) at x for a known d = d(x, z) > 0.
void grad_dist_ambient(const Point& x, const Point& z, double d, std::span<double> out);

/// The exact origin when x lies within `tol` (unit distance) of it, x otherwise.
/// Used after boosts so that a center moved to the origin stays exactly there.
Point snap_to_origin(const Point& x, double tol = 1e-12);

double riemannian_inner(const TangentVector& u, const TangentVector& v);
double riemannian_norm(const TangentVector& v);

/// cosh(r) x + sinh(r) v for a unit tangent v.
Point exp_map(const Point& x, const TangentVector& v, double r);

/// Orthonormal basis of T_x H^N (Gram-Schmidt against x).
std::vector<TangentVector> tangent_basis(const Point& x);

/// Unit tangent at x from N ambient direction weights in the tangent basis.
TangentVector tangent_from_frame(const Point& x, std::span<const double> weights);

/// Surface measure of the unit (N-1)-sphere.
double sphere_area(int dim);

enum class Quantity {
  distance,       ///< lengths scale by 1/sqrt(c)
  volume_element, ///< dv scales by c^{-N/2}
  gradient_norm,  ///< |grad f| of a fixed scalar field scales by sqrt(c)
  potential,      ///< inverse-square-length weights scale by c
};

/// Maps a curvature -1 quantity to its curvature -c counterpart.
double rescale_to_curvature(const CurvatureModel& model, Quantity kind, double value, int dim = 0);

/// Lorentz boost moving `center` to the origin.
class Isometry {
 public:
  static Isometry moving_to_origin(const Point& center);

  Point apply(const Point& x) const;
  Point apply_inverse(const Point& x) const;
  TangentVector apply(const TangentVector& v) const;

 private:
  void transform(std::span<const double> in, std::span<double> out, double sign) const;
  int dim_ = 0;
  double c0_ = 1.0;
  Point::Storage spatial_{};
};

}  // namespace hyperhardy
