#include "hyperhardy/rules.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "hyperhardy/error.hpp"

namespace hyperhardy {

namespace {

Rule1D compute_gauss_legendre(int n) {
  Rule1D rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

// Kronrod 15 / Gauss 7 abscissae and weights (QUADPACK qk15).
constexpr std::array<double, 8> kXgk = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  int depth;
};

void kronrod(const std::function<double(double)>& f, double a, double b, double& result, double& error) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[static_cast<std::size_t>(j)];
    const double fsum = f(center - dx) + f(center + dx);
    resk += kWgk[static_cast<std::size_t>(j)] * fsum;
    if (j % 2 == 1) resg += kWg[static_cast<std::size_t>(j / 2)] * fsum;
  }
  result = resk * half;
  error = std::abs((resk - resg) * half);
}

}  // namespace

const Rule1D& gauss_legendre(int n) {
  if (n < 1 || n > 256) throw DomainError("gauss_legendre: order must be in [1, 256]");
  static std::mutex mutex;
  static std::map<int, Rule1D> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

Rule1D tanh_sinh_origin(double h, int levels, double floor) {
  if (!(h > 0.0)) throw DomainError("tanh_sinh_origin: panel length must be positive");
  if (levels < 1 || levels > 10) throw DomainError("tanh_sinh_origin: levels must be in [1, 10]");
  const double step = std::ldexp(1.0, -levels);
  const double half_pi = 0.5 * std::numbers::pi;
  Rule1D rule;
  // r(u) = h / (1 + exp(-pi sinh u)); dr/du = h pi cosh u e / (1 + e)^2, e = exp(-pi sinh u)
  for (int k = -static_cast<int>(8.0 / step); k <= static_cast<int>(8.0 / step); ++k) {
    const double u = k * step;
    const double e = std::exp(-2.0 * half_pi * std::sinh(u));
    if (!std::isfinite(e)) continue;
    const double r = h / (1.0 + e);
    const double w = step * h * 2.0 * half_pi * std::cosh(u) * e / ((1.0 + e) * (1.0 + e));
    if (r < floor * h) continue;
    if (w < 1e-30 * h) continue;
    if (!(r < h)) continue;
    rule.nodes.push_back(r);
    rule.weights.push_back(w);
  }
  return rule;
}

double adaptive_gauss_kronrod(const std::function<double(double)>& f, double a, double b, double rel_tol,
                              double abs_tol, int max_depth) {
  if (!(b > a)) return 0.0;
  double total = 0.0;
  std::vector<Panel> stack{{a, b, 0}};
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    double value = 0.0;
    double error = 0.0;
    kronrod(f, p.a, p.b, value, error);
    if (!std::isfinite(value)) throw NumericalError("adaptive_gauss_kronrod: non-finite integrand");
    if (error <= std::max(abs_tol, rel_tol * std::abs(value)) || p.depth >= max_depth) {
      total += value;
      continue;
    }
    const double mid = 0.5 * (p.a + p.b);
    stack.push_back({mid, p.b, p.depth + 1});
    stack.push_back({p.a, mid, p.depth + 1});
  }
  return total;
}

}  // namespace hyperhardy
