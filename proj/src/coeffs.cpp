#include "hyperhardy/coeffs.hpp"

#include <array>
#include <cassert>
#include <cmath>
#include <iostream>
#include <mutex>
#include <string>

#include "hyperhardy/error.hpp"

namespace hyperhardy {

namespace {

constexpr double kWindowTol = 1e-12;

// Taylor coefficients of g(s) = sum_k a_k s^{2k-2}, a_k = 2^{2k} B_{2k} / (2k)!.
std::array<double, 12> series_coefficients() {
  constexpr std::array<std::array<long double, 2>, 12> bernoulli = {{{1.0L, 6.0L},
                                                                      {-1.0L, 30.0L},
                                                                      {1.0L, 42.0L},
                                                                      {-1.0L, 30.0L},
                                                                      {5.0L, 66.0L},
                                                                      {-691.0L, 2730.0L},
                                                                      {7.0L, 6.0L},
                                                                      {-3617.0L, 510.0L},
                                                                      {43867.0L, 798.0L},
                                                                      {-174611.0L, 330.0L},
                                                                      {854513.0L, 138.0L},
                                                                      {-236364091.0L, 2730.0L}}};
  std::array<double, 12> a{};
  long double factorial = 1.0L;
  long double pow4 = 1.0L;
  for (int k = 1; k <= 12; ++k) {
    factorial *= static_cast<long double>(2 * k - 1) * static_cast<long double>(2 * k);
    pow4 *= 4.0L;
    const auto& b = bernoulli[static_cast<std::size_t>(k - 1)];
    a[static_cast<std::size_t>(k - 1)] = static_cast<double>(pow4 * b[0] / b[1] / factorial);
  }
  return a;
}

// Below this argument the series replaces (s coth s - 1)/s^2; both branches
// agree to ~1e-15 relative there.
constexpr double kSeriesSwitch = 0.5;

void check_distance(double d, const char* what) {
  if (!(d > 0.0)) throw DomainError(std::string(what) + ": distance must be > 0");
}

double pair_inner(const Point& x, const Point& a, const Point& b) {
  return riemannian_inner(grad_dist(x, a), grad_dist(x, b));
}

}  // namespace

SpectralParams SpectralParams::make(int N, double lambda, double c, bool allow_below_window) {
  if (N < 3 || N > kMaxDim) throw DomainError("N must be in [3, " + std::to_string(kMaxDim) + "]");
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("curvature magnitude c must be > 0");
  if (!std::isfinite(lambda)) throw DomainError("lambda must be finite");
  const double top = 0.25 * (N - 1) * (N - 1);
  if (lambda > top + kWindowTol) throw DomainError("lambda above Poincare constant (N-1)^2/4");
  SpectralParams p;
  p.N = N;
  p.lambda = std::min(lambda, top);
  p.c = c;
  if (lambda < N - 2 - kWindowTol) {
    if (!allow_below_window) throw DomainError("lambda below N-2 (outside the admissible window)");
    p.exploratory = true;
    static std::once_flag warned;
    std::call_once(warned, [] { std::clog << "warning: lambda < N-2 makes C_N(lambda) negative\n"; });
  }
  return p;
}

double gamma(const SpectralParams& params) {
  const double top = params.poincare_constant();
  if (params.lambda > top + kWindowTol) throw DomainError("above Poincare constant");
  const double arg = (params.N - 1.0) * (params.N - 1.0) - 4.0 * params.lambda;
  return std::sqrt(std::max(0.0, arg));
}

HardyConstants hardy_constants(const SpectralParams& params) {
  const double g = gamma(params);
  const double n = params.N;
  return {0.25 * (g + 1.0) * (g + 1.0), 0.25 * (n - 1.0 + g) * (n - 3.0 - g), 0.5 * g * (g + 1.0)};
}

double g_unit(double s) {
  if (!(s > 0.0)) throw DomainError("g: argument must be > 0");
  if (s < kSeriesSwitch) {
    static const std::array<double, 12> a = series_coefficients();
    const double s2 = s * s;
    double acc = 0.0;
    for (int k = 11; k >= 0; --k) acc = acc * s2 + a[static_cast<std::size_t>(k)];
    return acc;
  }
  return (s / std::tanh(s) - 1.0) / (s * s);
}

double g_fn(double r, double c) {
  if (!(r > 0.0)) throw DomainError("g_c: r must be > 0");
  if (!(c > 0.0)) throw DomainError("g_c: c must be > 0");
  return c * g_unit(std::sqrt(c) * r);
}

double inv_sinh_sq(double r, double c) {
  const double sh = std::sinh(std::sqrt(c) * r);
  return c / (sh * sh);
}

double radial_potential(const SpectralParams& params, double r) {
  check_distance(r, "potential");
  const HardyConstants k = hardy_constants(params);
  double v = k.H / (r * r);
  if (k.C != 0.0) v += k.C * inv_sinh_sq(r, params.c);
  if (k.D != 0.0) v += k.D * g_fn(r, params.c);
  return v;
}

PoleConfig PoleConfig::make(std::vector<Point> poles) {
  if (poles.size() < 2) throw DomainError("pole configuration needs M >= 2 poles");
  const int dim = poles.front().dim();
  double dmin = INFINITY;
  for (std::size_t j = 0; j < poles.size(); ++j) {
    if (poles[j].dim() != dim) throw DomainError("poles have different dimensions");
    for (std::size_t k = j + 1; k < poles.size(); ++k) {
      const double djk = geodesic_distance(poles[j], poles[k]);
      if (!(djk > 0.0)) throw DomainError("poles must be pairwise distinct");
      dmin = std::min(dmin, djk);
    }
  }
  PoleConfig cfg;
  cfg.poles_ = std::move(poles);
  cfg.d_ = 0.5 * dmin;
  return cfg;
}

double curved_distance(const Point& x, const Point& y, double c) { return geodesic_distance(x, y) / std::sqrt(c); }

double unipolar_potential(const SpectralParams& params, const Point& x0, const Point& x) {
  const double d = curved_distance(x, x0, params.c);
  if (!(d > 0.0)) throw DomainError("singular point: x coincides with the pole");
  return radial_potential(params, d);
}

double multipolar_potential(const SpectralParams& params, std::span<const Point> poles, const Point& x) {
  double v = 0.0;
  for (const Point& y : poles) v += unipolar_potential(params, y, x);
  return v;
}

double ceiling_K(const SpectralParams& params, double d) {
  check_distance(d, "ceiling_K");
  const HardyConstants k = hardy_constants(params);
  return k.H / (d * d) + k.C * inv_sinh_sq(0.5 * d, params.c) + k.D * g_fn(0.5 * d, params.c);
}

double far_bound(const SpectralParams& params, double d) {
  check_distance(d, "far_bound");
  return radial_potential(params, d);
}

double green_scaled_tail(int N, double d) {
  if (N < 3) throw DomainError("green function needs N >= 3");
  check_distance(d, "green_log_gradient");
  // T_n = sinh^n(d) int_d^inf sinh^{-n}(s) ds for n = N - 1.
  const int p = N - 1;
  if (d < 1.0) {
    // T_n = (sinh d cosh d - (n - 2) sinh^2 d T_{n-2}) / (n - 1), stable for small d.
    const double sh = std::sinh(d);
    const double ch = std::cosh(d);
    double t = (p % 2 == 1) ? sh * std::log(1.0 / std::tanh(0.5 * d)) : sh * std::exp(-d);
    for (int n = (p % 2 == 1) ? 3 : 4; n <= p; n += 2) t = (sh * ch - (n - 2.0) * sh * sh * t) / (n - 1.0);
    return t;
  }
  // T_n = (1 - E)^n sum_k binom(n + k - 1, k) E^k / (n + 2k), E = e^{-2d} <= e^{-2}.
  const double E = std::exp(-2.0 * d);
  double term = 1.0;
  double sum = 1.0 / p;
  for (int k = 1; k < 200; ++k) {
    term *= E * (p + k - 1.0) / k;
    const double add = term / (p + 2.0 * k);
    sum += add;
    if (add < 1e-17 * sum) break;
  }
  return std::pow(-std::expm1(-2.0 * d), p) * sum;
}

double green_log_gradient(int N, double d) {
  if (N < 3) throw DomainError("green function needs N >= 3");
  check_distance(d, "green_log_gradient");
  if (N == 3) {
    // G = coth d - 1, |G'| = 1/sinh^2 d, ratio = 2 / (1 - e^{-2d})
    const double closed = 2.0 / -std::expm1(-2.0 * d);
#ifndef NDEBUG
    assert(std::abs(closed * green_scaled_tail(3, d) - 1.0) < 1e-9);
#endif
    return closed;
  }
  return 1.0 / green_scaled_tail(N, d);
}

void WeightDescriptor::validate() const {
  if (poles.empty()) throw DomainError("weight descriptor needs at least one pole");
  if ((kind == WeightKind::multipolar || kind == WeightKind::ffk) && poles.size() < 2) {
    throw DomainError("multipolar weights need M >= 2 poles");
  }
  if (alpha) {
    const auto& a = *alpha;
    if (a.size() != poles.size() + 1) throw DomainError("alpha must have M+1 entries");
    double s = 0.0;
    for (double v : a) {
      if (!(v > 0.0 && v <= 0.5 + 1e-15)) throw DomainError("alpha entries must lie in (0, 1/2]");
      s += v;
    }
    if (std::abs(s - 1.0) > 1e-12) throw DomainError("alpha entries must sum to 1");
  }
}

WeightDescriptor WeightDescriptor::moved(const Isometry& iso) const {
  WeightDescriptor out = *this;
  for (Point& p : out.poles) p = snap_to_origin(iso.apply(p));
  return out;
}

double critical_weight_W(const WeightDescriptor& descriptor, const Point& x) {
  descriptor.validate();
  const auto& poles = descriptor.poles;
  const int N = descriptor.params.N;
  const std::size_t M = poles.size();
  std::vector<double> rho(M);
  for (std::size_t i = 0; i < M; ++i) {
    const double di = geodesic_distance(x, poles[i]);
    if (!(di > 0.0)) throw DomainError("critical weight: x coincides with a pole");
    rho[i] = green_log_gradient(N, di);
  }
  if (!descriptor.alpha) {
    double acc = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
      acc += rho[i] * rho[i];
      for (std::size_t j = i + 1; j < M; ++j) acc += (rho[i] - rho[j]) * (rho[i] - rho[j]);
    }
    const double m1 = static_cast<double>(M + 1);
    return acc / (m1 * m1);
  }
  // grad log G_i = -rho_i grad d_i; grad log u_0 = 0
  const auto& a = *descriptor.alpha;
  double acc = 0.0;
  for (std::size_t i = 0; i < M; ++i) {
    acc += a[0] * a[i + 1] * rho[i] * rho[i];
    for (std::size_t j = i + 1; j < M; ++j) {
      const double cross = pair_inner(x, poles[i], poles[j]);
      const double sq = rho[i] * rho[i] + rho[j] * rho[j] - 2.0 * rho[i] * rho[j] * cross;
      acc += a[i + 1] * a[j + 1] * std::max(0.0, sq);
    }
  }
  return acc;
}

double ffk_weight(const SpectralParams& params, std::span<const Point> poles, const Point& x) {
  const std::size_t M = poles.size();
  if (M < 2) throw DomainError("ffk weight needs M >= 2 poles");
  const double n = params.N;
  std::vector<double> dist(M);
  std::vector<TangentVector> grads;
  grads.reserve(M);
  for (std::size_t i = 0; i < M; ++i) {
    dist[i] = curved_distance(x, poles[i], params.c);
    if (!(dist[i] > 0.0)) throw DomainError("ffk weight: x coincides with a pole");
    grads.push_back(grad_dist(x, poles[i]));
  }
  double pairs = 0.0;
  for (std::size_t i = 0; i < M; ++i) {
    for (std::size_t j = i + 1; j < M; ++j) {
      const double cross = riemannian_inner(grads[i], grads[j]);
      pairs += 1.0 / (dist[i] * dist[i]) + 1.0 / (dist[j] * dist[j]) - 2.0 * cross / (dist[i] * dist[j]);
    }
  }
  double tail = 0.0;
  for (std::size_t k = 0; k < M; ++k) tail += g_fn(dist[k], params.c);
  const double m = static_cast<double>(M);
  return (n - 2.0) * (n - 2.0) / (m * m) * pairs + (n - 2.0) * (n - 1.0) / m * tail;
}

double evaluate_weight(const WeightDescriptor& descriptor, const Point& x) {
  switch (descriptor.kind) {
    case WeightKind::unipolar:
      return unipolar_potential(descriptor.params, descriptor.poles.front(), x);
    case WeightKind::multipolar:
      return multipolar_potential(descriptor.params, descriptor.poles, x);
    case WeightKind::ffk:
      return ffk_weight(descriptor.params, descriptor.poles, x);
    case WeightKind::green_critical:
      return critical_weight_W(descriptor, x);
  }
  throw DomainError("unknown weight kind");
}

}  // namespace hyperhardy
