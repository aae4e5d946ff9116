#include "hyperhardy/hypgeom.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <string>

#include "hyperhardy/error.hpp"

namespace hyperhardy {

namespace {

std::atomic<std::uint64_t> g_numeric_warnings{0};

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw DomainError("dimension must be in [1, " + std::to_string(kMaxDim) + "], got " + std::to_string(dim));
  }
}

bool same_base(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) return false;
  for (int i = 0; i <= a.dim(); ++i) {
    if (std::abs(a[i] - b[i]) > 1e-9 * (1.0 + std::abs(a[i]))) return false;
  }
  return true;
}

}  // namespace

Point renormalized(const Point::Storage& raw, int dim) {
  Point p;
  p.dim_ = dim;
  double s = 0.0;
  for (int i = 1; i <= dim; ++i) {
    p.data_[i] = raw[i];
    s += raw[i] * raw[i];
  }
  p.data_[0] = std::sqrt(1.0 + s);
  return p;
}

Point Point::origin(int dim) {
  check_dim(dim);
  Storage raw{};
  return renormalized(raw, dim);
}

Point Point::from_spatial(std::span<const double> spatial) {
  check_dim(static_cast<int>(spatial.size()));
  Storage raw{};
  for (std::size_t i = 0; i < spatial.size(); ++i) raw[i + 1] = spatial[i];
  return renormalized(raw, static_cast<int>(spatial.size()));
}

Point Point::from_ambient(std::span<const double> coords) {
  if (coords.size() < 2) throw DomainError("ambient coordinates need at least 2 entries");
  const int dim = static_cast<int>(coords.size()) - 1;
  check_dim(dim);
  if (!(coords[0] >= 1.0 - 1e-12)) throw DomainError("time-like coordinate must be >= 1");
  const double defect = std::abs(minkowski_inner(coords, coords) + 1.0) / (coords[0] * coords[0]);
  if (!(defect <= 1e-6)) throw DomainError("coordinates are not on the hyperboloid <x,x> = -1");
  Storage raw{};
  for (std::size_t i = 0; i < coords.size(); ++i) raw[i] = coords[i];
  return renormalized(raw, dim);
}

Point Point::polar(double r, std::span<const double> direction) {
  check_dim(static_cast<int>(direction.size()));
  if (!(r >= 0.0)) throw DomainError("polar radius must be nonnegative");
  double n2 = 0.0;
  for (double v : direction) n2 += v * v;
  if (!(n2 > 0.0)) throw DomainError("polar direction must be nonzero");
  const double scale = std::sinh(r) / std::sqrt(n2);
  Storage raw{};
  for (std::size_t i = 0; i < direction.size(); ++i) raw[i + 1] = scale * direction[i];
  return renormalized(raw, static_cast<int>(direction.size()));
}

double Point::hyperboloid_defect() const {
  return std::abs(minkowski_inner(coords(), coords()) + 1.0) / (data_[0] * data_[0]);
}

TangentVector::TangentVector(const Point& base, std::span<const double> components) : base_(base) {
  if (static_cast<int>(components.size()) != base.dim() + 1) {
    throw DomainError("tangent vector needs N+1 ambient components");
  }
  for (std::size_t i = 0; i < components.size(); ++i) data_[i] = components[i];
}

TangentVector TangentVector::scaled(double s) const {
  TangentVector out = *this;
  for (int i = 0; i <= base_.dim(); ++i) out.data_[i] *= s;
  return out;
}

TangentVector TangentVector::operator+(const TangentVector& other) const {
  if (!same_base(base_, other.base_)) throw DomainError("tangent vectors live at different base points");
  TangentVector out = *this;
  for (int i = 0; i <= base_.dim(); ++i) out.data_[i] += other.data_[i];
  return out;
}

TangentVector TangentVector::operator-(const TangentVector& other) const { return *this + other.scaled(-1.0); }

CurvatureModel::CurvatureModel(double curvature) : c(curvature) {
  if (!(curvature > 0.0) || !std::isfinite(curvature)) throw DomainError("curvature magnitude c must be > 0");
}

double CurvatureModel::sqrt_c() const { return std::sqrt(c); }

double CurvatureModel::warp(double r) const {
  const double s = sqrt_c();
  return std::sinh(s * r) / s;
}

double CurvatureModel::volume_factor(int dim, double r) const { return std::pow(warp(r), dim - 1); }

double minkowski_inner(std::span<const double> a, std::span<const double> b) {
  double s = -a[0] * b[0];
  for (std::size_t i = 1; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double geodesic_distance(const Point& x, const Point& y) {
  if (x.dim() != y.dim()) throw DomainError("points have different dimensions");
  // Far apart: cosh d = -<x, y> is well conditioned.
  const double z = -minkowski_inner(x.coords(), y.coords());
  if (z > 2.0) return std::acosh(z);
  // Nearby: <x-y, x-y>_L = 4 sinh^2(d/2), stable unlike arccosh near 1.
  double q = 0.0;
  {
    const double d0 = x[0] - y[0];
    q = -d0 * d0;
    for (int i = 1; i <= x.dim(); ++i) {
      const double di = x[i] - y[i];
      q += di * di;
    }
  }
  if (q < 0.0) {
    if (q < -1e-14 * x[0] * y[0]) g_numeric_warnings.fetch_add(1, std::memory_order_relaxed);
    return 0.0;
  }
  return 2.0 * std::asinh(0.5 * std::sqrt(q));
}

std::uint64_t numeric_warning_count() { return g_numeric_warnings.load(std::memory_order_relaxed); }

void reset_numeric_warning_count() { g_numeric_warnings.store(0, std::memory_order_relaxed); }

TangentVector grad_dist(const Point& x, const Point& z) {
  const double d = geodesic_distance(x, z);
  if (!(d > 0.0)) throw DomainError("gradient undefined at pole");
  // cosh(d) x - z = (x - z) + 2 sinh^2(d/2) x
  const double sh = std::sinh(0.5 * d);
  const double k = 2.0 * sh * sh;
  const double inv = 1.0 / std::sinh(d);
  Point::Storage v{};
  for (int i = 0; i <= x.dim(); ++i) v[i] = ((x[i] - z[i]) + k * x[i]) * inv;
  // project onto T_x to remove rounding along x
  const std::span<const double> vs{v.data(), static_cast<std::size_t>(x.dim()) + 1};
  const double along = minkowski_inner(vs, x.coords());
  for (int i = 0; i <= x.dim(); ++i) v[i] += along * x[i];
  return TangentVector(x, vs);
}

void grad_dist_ambient(const Point& x, const Point& z, double d, std::span<double> out) {
  const double sh = std::sinh(0.5 * d);
  const double k = 2.0 * sh * sh;
  const double inv = 1.0 / std::sinh(d);
  const int n = x.dim();
  for (int i = 0; i <= n; ++i) out[i] = ((x[i] - z[i]) + k * x[i]) * inv;
  const double along = minkowski_inner(out.first(static_cast<std::size_t>(n) + 1), x.coords());
  for (int i = 0; i <= n; ++i) out[i] += along * x[i];
}

Point snap_to_origin(const Point& x, double tol) {
  double n2 = 0.0;
  for (double v : x.spatial()) n2 += v * v;
  return n2 <= tol * tol ? Point::origin(x.dim()) : x;
}

double riemannian_inner(const TangentVector& u, const TangentVector& v) {
  if (!same_base(u.base(), v.base())) throw DomainError("riemannian_inner: mismatched base points");
  return minkowski_inner(u.components(), v.components());
}

double riemannian_norm(const TangentVector& v) {
  return std::sqrt(std::max(0.0, minkowski_inner(v.components(), v.components())));
}

Point exp_map(const Point& x, const TangentVector& v, double r) {
  if (!same_base(x, v.base())) throw DomainError("exp_map: tangent vector based elsewhere");
  if (!(r >= 0.0)) throw DomainError("exp_map: r must be nonnegative");
  if (std::abs(riemannian_norm(v) - 1.0) > 1e-8) throw DomainError("exp_map: direction must be a unit vector");
  const double ch = std::cosh(r);
  const double sh = std::sinh(r);
  Point::Storage raw{};
  for (int i = 0; i <= x.dim(); ++i) raw[i] = ch * x[i] + sh * v[i];
  return renormalized(raw, x.dim());
}

std::vector<TangentVector> tangent_basis(const Point& x) {
  // Standard frame at the origin pushed forward by the boost origin -> x.
  std::vector<TangentVector> basis;
  basis.reserve(static_cast<std::size_t>(x.dim()));
  std::array<double, kMaxDim> w{};
  for (int k = 0; k < x.dim(); ++k) {
    w.fill(0.0);
    w[k] = 1.0;
    basis.push_back(tangent_from_frame(x, {w.data(), static_cast<std::size_t>(x.dim())}));
  }
  return basis;
}

TangentVector tangent_from_frame(const Point& x, std::span<const double> weights) {
  if (static_cast<int>(weights.size()) != x.dim()) throw DomainError("tangent_from_frame: need N weights");
  double n2 = 0.0;
  for (double w : weights) n2 += w * w;
  if (!(n2 > 0.0)) throw DomainError("tangent_from_frame: zero direction");
  const double inv = 1.0 / std::sqrt(n2);
  const double c0 = x[0];
  double dot = 0.0;
  for (int k = 1; k <= x.dim(); ++k) dot += x[k] * weights[k - 1] * inv;
  Point::Storage out{};
  out[0] = dot;
  for (int i = 1; i <= x.dim(); ++i) out[i] = weights[i - 1] * inv + dot * x[i] / (1.0 + c0);
  return TangentVector(x, {out.data(), static_cast<std::size_t>(x.dim()) + 1});
}

double sphere_area(int dim) {
  if (dim < 2) throw DomainError("sphere_area: N must be >= 2");
  const double h = 0.5 * dim;
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

double rescale_to_curvature(const CurvatureModel& model, Quantity kind, double value, int dim) {
  const double s = model.sqrt_c();
  switch (kind) {
    case Quantity::distance:
      return value / s;
    case Quantity::volume_element:
      if (dim < 1) throw DomainError("rescale_to_curvature: volume_element needs the dimension");
      return value * std::pow(model.c, -0.5 * dim);
    case Quantity::gradient_norm:
      return value * s;
    case Quantity::potential:
      return value * model.c;
  }
  throw DomainError("rescale_to_curvature: unknown quantity kind");
}

Isometry Isometry::moving_to_origin(const Point& center) {
  Isometry iso;
  iso.dim_ = center.dim();
  iso.c0_ = center[0];
  for (int i = 1; i <= center.dim(); ++i) iso.spatial_[i] = center[i];
  return iso;
}

void Isometry::transform(std::span<const double> in, std::span<double> out, double sign) const {
  // Pure boost: L(y) = (c0 y0 - s cs.ys, ys - s cs y0 + (cs.ys) cs / (1 + c0)),
  // s = +1 for the forward map, -1 for its inverse.
  double dot = 0.0;
  for (int i = 1; i <= dim_; ++i) dot += spatial_[i] * in[i];
  out[0] = c0_ * in[0] - sign * dot;
  const double k = dot / (1.0 + c0_);
  for (int i = 1; i <= dim_; ++i) out[i] = in[i] - sign * spatial_[i] * in[0] + k * spatial_[i];
}

Point Isometry::apply(const Point& x) const {
  if (x.dim() != dim_) throw DomainError("isometry: dimension mismatch");
  Point::Storage out{};
  transform(x.coords(), {out.data(), static_cast<std::size_t>(dim_) + 1}, 1.0);
  return renormalized(out, dim_);
}

Point Isometry::apply_inverse(const Point& x) const {
  if (x.dim() != dim_) throw DomainError("isometry: dimension mismatch");
  Point::Storage out{};
  transform(x.coords(), {out.data(), static_cast<std::size_t>(dim_) + 1}, -1.0);
  return renormalized(out, dim_);
}

TangentVector Isometry::apply(const TangentVector& v) const {
  const Point base = apply(v.base());
  Point::Storage out{};
  transform(v.components(), {out.data(), static_cast<std::size_t>(dim_) + 1}, 1.0);
  return TangentVector(base, {out.data(), static_cast<std::size_t>(dim_) + 1});
}

}  // namespace hyperhardy
