#include "hyperhardy/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hyperhardy/error.hpp"
#include "hyperhardy/rng.hpp"

namespace hyperhardy {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGuard = 1e-14;

void check_t(double t) {
  if (!(t >= 0.0)) throw DomainError("cutoff: t must be >= 0");
}

double reduced_profile(double t) {
  const double c = std::cos(kPi * t);
  return c * c * (1.0 / (t * t) + 1.0 / ((2.0 - t) * (2.0 - t)));
}

double norm_sq(const Point::Storage& g, std::size_t n) { return minkowski_inner({g.data(), n}, {g.data(), n}); }

}  // namespace

double cutoff(double t) {
  check_t(t);
  if (t <= 0.5) return 1.0;
  if (t < 1.0) return std::sin(kPi * t);
  return 0.0;
}

double cutoff_deriv(double t) {
  check_t(t);
  if (t < 0.5 || t >= 1.0) return 0.0;
  return kPi * std::cos(kPi * t);
}

double cutoff_complement(double t) {
  check_t(t);
  if (t <= 0.5) return 0.0;
  if (t < 1.0) return -std::cos(kPi * t);
  return 1.0;
}

double cutoff_complement_deriv(double t) {
  check_t(t);
  if (t < 0.5 || t >= 1.0) return 0.0;
  return kPi * std::sin(kPi * t);
}

Partition Partition::make(const PoleConfig& poles, double c) {
  if (!(c > 0.0)) throw DomainError("partition: c must be > 0");
  Partition p;
  p.poles_ = poles.poles();
  p.d_unit_ = poles.d();
  p.d_ = poles.d(c);
  p.c_ = c;
  return p;
}

void Partition::evaluate(const Point& x, std::span<const Point> poles_in_frame, Values& out) const {
  const std::size_t M = poles_.size();
  const auto n = static_cast<std::size_t>(x.dim()) + 1;
  out.value.assign(M + 1, 0.0);
  out.complement.assign(M, 1.0);
  out.quotient.assign(M, 0.0);
  out.grad.assign(M + 1, Point::Storage{});
  double comp = 1.0;
  Point::Storage e{};
  for (std::size_t k = 0; k < M; ++k) {
    const double dk = geodesic_distance(x, poles_in_frame[k]);
    const double t = dk / d_unit_;
    out.value[k] = cutoff(t);
    out.complement[k] = cutoff_complement(t);
    comp *= out.complement[k];
    const double dj = cutoff_deriv(t);
    if (dj != 0.0 && dk > 0.0) {
      grad_dist_ambient(x, poles_in_frame[k], dk, e);
      for (std::size_t i = 0; i < n; ++i) out.grad[k][i] = dj / d_ * e[i];
      const double q = out.complement[k] * out.complement[k];
      if (q > 0.0) out.quotient[k] = dj * dj / (d_ * d_ * q);
    }
  }
  out.value[M] = comp;
  // Product rule; at most one factor differs from 1 when the supports are disjoint.
  for (std::size_t k = 0; k < M; ++k) {
    const double t = geodesic_distance(x, poles_in_frame[k]) / d_unit_;
    const double dc = cutoff_complement_deriv(t);
    if (dc == 0.0) continue;
    double others = 1.0;
    for (std::size_t l = 0; l < M; ++l) {
      if (l != k) others *= out.complement[l];
    }
    const double dk = t * d_unit_;
    grad_dist_ambient(x, poles_in_frame[k], dk, e);
    for (std::size_t i = 0; i < n; ++i) out.grad[M][i] += dc * others / d_ * e[i];
  }
}

double Partition::member_value(std::size_t k, const Point& x) const {
  if (k > poles_.size()) throw DomainError("partition member index out of range");
  Values v;
  evaluate(x, v);
  return v.value[k];
}

double Partition::member_gradsq(std::size_t k, const Point& x) const {
  if (k > poles_.size()) throw DomainError("partition member index out of range");
  Values v;
  evaluate(x, v);
  return std::max(0.0, norm_sq(v.grad[k], static_cast<std::size_t>(x.dim()) + 1));
}

std::optional<double> gradsum_identity_residual(const Partition& partition, const Point& x) {
  Partition::Values v;
  partition.evaluate(x, v);
  const std::size_t M = partition.complement_index();
  const auto n = static_cast<std::size_t>(x.dim()) + 1;
  double lhs = 0.0;
  double rhs = 0.0;
  for (std::size_t k = 0; k <= M; ++k) {
    const double g2 = std::max(0.0, norm_sq(v.grad[k], n));
    lhs += g2;
    if (k == M) continue;
    const double denom = v.complement[k] * v.complement[k];
    if (g2 == 0.0) continue;
    if (denom < kGuard) return std::nullopt;
    rhs += g2 / denom;
  }
  return std::abs(lhs - rhs);
}

ReducedMaximum reduced_cutoff_maximum() {
  ReducedMaximum best{0.5, reduced_profile(0.5)};
  constexpr int kGrid = 2000;
  for (int i = 0; i <= kGrid; ++i) {
    const double t = 0.5 + 0.5 * i / kGrid;
    const double v = reduced_profile(t);
    if (v > best.value) best = {t, v};
  }
  double a = std::max(0.5, best.t - 0.5 / kGrid);
  double b = std::min(1.0, best.t + 0.5 / kGrid);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = reduced_profile(x1);
  double f2 = reduced_profile(x2);
  while (b - a > 1e-12) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = reduced_profile(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = reduced_profile(x1);
    }
  }
  for (double t : {a, b, 0.5 * (a + b)}) {
    const double v = reduced_profile(t);
    if (v > best.value) best = {t, v};
  }
  return best;
}

LemmaBound lemma_bound_check(const SpectralParams& params, const Point& y1, const Point& y2, std::uint64_t seed,
                             int rays, int nodes_per_ray) {
  const PoleConfig cfg = PoleConfig::make({y1, y2});
  const Partition part = Partition::make(cfg, params.c);
  const double d = part.scale();
  const double sc = std::sqrt(params.c);
  const int N = y1.dim();
  LemmaBound out;
  out.bound = kPi * kPi / (d * d) + 2.0 * ceiling_K(params, d);
  Partition::Values v;
  const CounterRng rng(seed, 0x1e33aULL);
  std::vector<double> dir(static_cast<std::size_t>(N));
  for (int side = 0; side < 2; ++side) {
    const Point& base = side == 0 ? y1 : y2;
    const Point& other = side == 0 ? y2 : y1;
    const Isometry iso = Isometry::moving_to_origin(base);
    const std::vector<Point> frame{Point::origin(N), iso.apply(other)};
    const std::vector<Point> ordered = side == 0 ? frame : std::vector<Point>{frame[1], frame[0]};
    for (int ray = 0; ray < rays; ++ray) {
      if (ray == 0) {
        const auto s = frame[1].spatial();
        std::copy(s.begin(), s.end(), dir.begin());
      } else {
        for (int k = 0; k < N; ++k) {
          dir[static_cast<std::size_t>(k)] =
              rng.normal(static_cast<std::uint64_t>((side * rays + ray) * kMaxDim + k));
        }
      }
      for (int j = 0; j < nodes_per_ray; ++j) {
        const double r = d * (0.5 + 0.5 * (j + 0.5) / nodes_per_ray);
        const Point x = Point::polar(sc * r, dir);
        part.evaluate(x, ordered, v);
        double total = v.quotient[0] + v.quotient[1];
        const double rest = 1.0 - v.value[0] * v.value[0] - v.value[1] * v.value[1];
        if (rest > 0.0) total += rest * multipolar_potential(params, ordered, x);
        out.supremum = std::max(out.supremum, total);
      }
    }
  }
  out.pass = out.supremum <= out.bound * (1.0 + 1e-12);
  return out;
}

ImsDecomposition ims_decomposition(const Partition& partition, const Superposition& u, const WeightDescriptor& V,
                                   const QuadratureSpec& quad) {
  quad.validate();
  V.validate();
  const double c = partition.curvature();
  const double d = partition.scale();
  ImsDecomposition out;
  const std::vector<double> seams{0.5 * d, d};
  const std::vector<Cell> cells = integration_cells(u, partition.poles(), c, d, seams);
  if (cells.empty()) return out;
  const std::size_t M = partition.complement_index();

  FrameBinder field = [&partition, &u, &V, c, M](const Isometry& iso) -> LocalEvaluator {
    const Superposition ul = u.moved(iso);
    const WeightDescriptor vl = V.moved(iso);
    std::vector<Point> poles;
    for (const Point& p : partition.poles()) poles.push_back(snap_to_origin(iso.apply(p)));
    return [&partition, ul, vl, poles, c, M](const Point& x, double, std::span<double> out) {
      const auto n = static_cast<std::size_t>(x.dim()) + 1;
      Point::Storage gu{};
      const double uv = value_and_gradient(ul, x, c, gu);
      const double gu2 = minkowski_inner({gu.data(), n}, {gu.data(), n});
      if (uv == 0.0 && gu2 == 0.0) return;
      const double w = evaluate_weight(vl, x);
      const double u2 = uv * uv;
      Partition::Values pv;
      partition.evaluate(x, poles, pv);
      out[0] = gu2 - w * u2;
      bool inside = false;
      double localized = 0.0;
      double remainder = 0.0;
      Point::Storage g{};
      for (std::size_t k = 0; k <= M; ++k) {
        for (std::size_t i = 0; i < n; ++i) g[i] = uv * pv.grad[k][i] + pv.value[k] * gu[i];
        const double g2 = minkowski_inner({g.data(), n}, {g.data(), n});
        if (k < M) {
          localized += g2 - w * pv.value[k] * pv.value[k] * u2;
          if (pv.value[k] > 0.0) {
            inside = true;
            const double q = pv.complement[k] * pv.complement[k];
            remainder -= (pv.quotient[k] + q * w) * u2;
          }
        } else {
          remainder += g2;
        }
      }
      if (!inside) remainder -= w * u2;
      out[1] = localized;
      out[2] = remainder;
      out[3] = out[0] - localized - remainder;
    };
  };
  const VectorEstimate est = integrate_cells(cells, 4, field, quad, CurvatureModel(c));
  out.lhs_total = est.component(0);
  out.localized_sum = est.component(1);
  out.remainder = est.component(2);
  out.residual = est.component(3);
  return out;
}

}  // namespace hyperhardy
