#include "hyperhardy/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hyperhardy/error.hpp"
#include "hyperhardy/rules.hpp"

namespace hyperhardy {

namespace {

constexpr double kGrading = 1.05;
constexpr int kElementPoints = 8;
constexpr int kCorePoints = 16;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> multiply(const Tridiagonal& t, const std::vector<double>& x, bool absolute = false) {
  const std::size_t n = t.diag.size();
  auto m = [absolute](double a, double b) { return absolute ? std::abs(a * b) : a * b; };
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = m(t.diag[i], x[i]);
    if (i > 0) v += m(t.off[i - 1], x[i - 1]);
    if (i + 1 < n) v += m(t.off[i], x[i + 1]);
    y[i] = v;
  }
  return y;
}

// Solves (A - sigma B) x = rhs for a positive definite shifted pencil.
std::vector<double> solve_shifted(const AssembledForms& f, double sigma, std::vector<double> rhs) {
  const std::size_t n = f.A.diag.size();
  std::vector<double> d(n);
  std::vector<double> l(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = f.A.diag[i] - sigma * f.B.diag[i];
    if (i > 0) {
      const double e = f.A.off[i - 1] - sigma * f.B.off[i - 1];
      l[i] = e / d[i - 1];
      d[i] -= l[i] * e;
    }
    if (!(d[i] > 0.0)) throw NumericalError("spectral: shifted pencil is not positive definite");
  }
  for (std::size_t i = 1; i < n; ++i) rhs[i] -= l[i] * rhs[i - 1];
  for (std::size_t i = 0; i < n; ++i) rhs[i] /= d[i];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= l[i + 1] * rhs[i + 1];
  return rhs;
}

}  // namespace

void RadialProblem::validate() const {
  if (grid_size < 256) throw DomainError("spectral: grid size must be >= 256");
  if (!(outer_radius > 0.0) || !std::isfinite(outer_radius)) throw DomainError("spectral: R must be > 0");
}

RadialProblem RadialProblem::unipolar(const SpectralParams& params, double outer_radius, int grid_size,
                                      double epsilon) {
  RadialProblem p;
  p.params = params;
  p.outer_radius = outer_radius;
  p.grid_size = grid_size;
  p.potential = [params, epsilon](double r) { return (1.0 + epsilon) * radial_potential(params, r); };
  return p;
}

std::vector<double> radial_grid(double outer_radius, int grid_size, bool graded) {
  const auto n = static_cast<std::size_t>(grid_size);
  std::vector<double> steps(n, 1.0);
  if (graded) {
    const std::size_t m = std::min<std::size_t>(n / 4, 200);
    double h = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      steps[i] = h;
      if (i + 1 < m) h *= kGrading;
    }
  }
  // r_1 = h_1 / 2, r_{i+1} = r_i + h_i, r_{n+1} = R
  double total = 0.5 * steps[0];
  for (double h : steps) total += h;
  const double scale = outer_radius / total;
  std::vector<double> nodes(n);
  double r = 0.5 * steps[0] * scale;
  for (std::size_t i = 0; i < n; ++i) {
    nodes[i] = r;
    r += steps[i] * scale;
  }
  return nodes;
}

AssembledForms assemble(const RadialProblem& problem) {
  problem.validate();
  const int N = problem.params.N;
  const double lambda = problem.params.lambda * problem.params.c;
  const CurvatureModel cm(problem.params.c);
  AssembledForms f;
  f.nodes = radial_grid(problem.outer_radius, problem.grid_size, problem.graded);
  const std::size_t n = f.nodes.size();
  f.A.diag.assign(n, 0.0);
  f.A.off.assign(n - 1, 0.0);
  f.B.diag.assign(n, 0.0);
  f.B.off.assign(n - 1, 0.0);

  auto potential = [&](double r) {
    const double v = problem.potential ? problem.potential(r) : 0.0;
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "spectral: potential non-finite at r = " << r;
      throw NumericalError(msg.str());
    }
    return v;
  };

  // Core [0, r_1]: u is constant there.
  {
    const Rule1D& gl = gauss_legendre(kCorePoints);
    const double half = 0.5 * f.nodes[0];
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      const double r = half * (1.0 + gl.nodes[q]);
      const double w = half * gl.weights[q] * cm.volume_factor(N, r);
      f.B.diag[0] += w;
      f.A.diag[0] -= (lambda + potential(r)) * w;
    }
  }
  const Rule1D& gl = gauss_legendre(kElementPoints);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = f.nodes[i];
    const double b = i + 1 < n ? f.nodes[i + 1] : problem.outer_radius;
    const double h = b - a;
    double kk = 0.0;
    double m00 = 0.0, m01 = 0.0, m11 = 0.0;
    double p00 = 0.0, p01 = 0.0, p11 = 0.0;
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      const double x = 0.5 * (1.0 + gl.nodes[q]);
      const double r = a + h * x;
      const double w = 0.5 * h * gl.weights[q] * cm.volume_factor(N, r);
      const double v = lambda + potential(r);
      const double l0 = 1.0 - x;
      const double l1 = x;
      kk += w / (h * h);
      m00 += w * l0 * l0;
      m01 += w * l0 * l1;
      m11 += w * l1 * l1;
      p00 += v * w * l0 * l0;
      p01 += v * w * l0 * l1;
      p11 += v * w * l1 * l1;
    }
    f.A.diag[i] += kk - p00;
    f.B.diag[i] += m00;
    if (i + 1 < n) {
      f.A.diag[i + 1] += kk - p11;
      f.B.diag[i + 1] += m11;
      f.A.off[i] += -kk - p01;
      f.B.off[i] += m01;
    }
  }
  return f;
}

int count_below(const AssembledForms& forms, double theta) {
  const std::size_t n = forms.A.diag.size();
  int count = 0;
  double prev = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = forms.A.diag[i] - theta * forms.B.diag[i];
    if (i > 0) {
      const double e = forms.A.off[i - 1] - theta * forms.B.off[i - 1];
      d -= e * e / prev;
    }
    if (d == 0.0) d = -std::numeric_limits<double>::min();
    if (d < 0.0) ++count;
    prev = d;
  }
  return count;
}

EigenResult bottom_eigenvalue(const AssembledForms& forms) {
  const std::size_t n = forms.A.diag.size();
  if (n == 0) throw DomainError("spectral: empty problem");
  EigenResult res;
  double lo = -1.0;
  double hi = 1.0;
  int guard = 0;
  while (count_below(forms, lo) > 0) {
    hi = lo;
    lo *= 2.0;
    if (++guard > 2000) throw NumericalError("spectral: no lower bound for the spectrum");
  }
  while (count_below(forms, hi) == 0) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 2000) throw NumericalError("spectral: no upper bound for the spectrum");
  }
  while (hi - lo > 1e-14 * std::max(1.0, std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (count_below(forms, mid) == 0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (++res.iterations > 400) throw NumericalError("spectral: bisection did not converge");
  }
  const double theta = 0.5 * (lo + hi);

  // Inverse iteration just below theta keeps the shifted pencil definite.
  const double sigma = lo - 1e-9 * std::max(1.0, std::abs(lo));
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 / std::sqrt(forms.B.diag[i]);
  double scale = std::sqrt(dot(v, multiply(forms.B, v)));
  for (double& x : v) x /= scale;
  double previous = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 50; ++it) {
    v = solve_shifted(forms, sigma, multiply(forms.B, v));
    scale = std::sqrt(dot(v, multiply(forms.B, v)));
    for (double& x : v) x /= scale;
    const std::vector<double> av = multiply(forms.A, v);
    const std::vector<double> bv = multiply(forms.B, v);
    const std::vector<double> aa = multiply(forms.A, v, true);
    const std::vector<double> ba = multiply(forms.B, v, true);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = av[i] - theta * bv[i];
      const double s = aa[i] + std::abs(theta) * ba[i];
      num += r * r;
      den += s * s;
    }
    res.residual = std::sqrt(num / std::max(den, std::numeric_limits<double>::min()));
    if (res.residual < 1e-12) break;
    if (it >= 10 && std::abs(previous - res.residual) <= 1e-3 * res.residual) break;
    previous = res.residual;
  }
  if (!(res.residual <= 1e-8)) {
    std::ostringstream msg;
    msg << "spectral: eigenpair residual " << res.residual << " above tolerance at theta = " << theta;
    throw NumericalError(msg.str());
  }
  res.bottom_eigenvalue = theta;
  if (v[0] < 0.0) {
    for (double& x : v) x = -x;
  }
  res.eigenvector = std::move(v);
  return res;
}

EigenResult bottom_eigenvalue(const RadialProblem& problem) { return bottom_eigenvalue(assemble(problem)); }

}  // namespace hyperhardy
