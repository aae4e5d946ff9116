// Acceptance run: one line per criterion, nonzero exit if any criterion fails.

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "hyperhardy/coeffs.hpp"
#include "hyperhardy/hypgeom.hpp"
#include "hyperhardy/partition.hpp"
#include "hyperhardy/quad.hpp"
#include "hyperhardy/rng.hpp"
#include "hyperhardy/spectral.hpp"
#include "hyperhardy/testfn.hpp"
#include "hyperhardy/thresholds.hpp"
#include "hyperhardy/verify.hpp"
#include "support.hpp"

using namespace hyperhardy;
using hyperhardy::testing::on_axis;
using hyperhardy::testing::polygon_poles;
using hyperhardy::testing::random_point;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool ok = true;
  std::string detail;
};

class Check {
 public:
  void require(bool cond, const std::string& what) {
    if (!cond && failures_ < 5) detail_ += (detail_.empty() ? "" : "; ") + what;
    if (!cond) ++failures_;
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : "; ") + s; }
  Outcome outcome() const {
    if (failures_ == 0) return {true, notes_};
    return {false, std::to_string(failures_) + " violation(s): " + detail_};
  }

 private:
  int failures_ = 0;
  std::string detail_;
  std::string notes_;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome constants_suite() {
  Check ck;
  for (int N = 3; N <= 10; ++N) {
    const HardyConstants lo = hardy_constants(SpectralParams::make(N, N - 2.0));
    ck.require(std::abs(lo.H - (N - 2.0) * (N - 2.0) / 4.0) <= 1e-12, "H at N-2, N=" + std::to_string(N));
    ck.require(std::abs(lo.C) <= 1e-12, "C at N-2");
    ck.require(std::abs(lo.D - (N - 3.0) * (N - 2.0) / 2.0) <= 1e-12, "D at N-2");
    const HardyConstants hi = hardy_constants(SpectralParams::make(N, (N - 1.0) * (N - 1.0) / 4.0));
    ck.require(std::abs(hi.H - 0.25) <= 1e-12, "H at the spectral bottom, N=" + std::to_string(N));
    ck.require(std::abs(hi.C - (N - 1.0) * (N - 3.0) / 4.0) <= 1e-12, "C at the spectral bottom");
    ck.require(std::abs(hi.D) <= 1e-12, "D at the spectral bottom");
  }
  return ck.outcome();
}

Outcome special_function_suite() {
  Check ck;
  ck.require(std::abs(g_unit(0.01) - 1.0 / 3.0) <= 1e-4, "g(0.01)");
  ck.require(std::abs(1e3 * g_unit(1e3) - 1.0) <= 1e-3, "g(1000)");
  double prev = g_unit(1e-6);
  for (int i = 1; i < 1000; ++i) {
    const double s = 1e-6 * std::pow(1e10, i / 999.0);
    const double v = g_unit(s);
    ck.require(v < prev, "g not strictly decreasing at s=" + fmt("%.3g", s));
    prev = v;
  }
  double worst = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double d = 1e-3 * std::pow(3e4, i / 2000.0);
    const double exact = 2.0 / (-std::expm1(-2.0 * d));
    worst = std::max(worst, std::abs(green_log_gradient(3, d) / exact - 1.0));
  }
  ck.require(worst <= 1e-10, "Green ratio relative error " + fmt("%.3g", worst));
  ck.note("max Green ratio error " + fmt("%.2e", worst));
  return ck.outcome();
}

Outcome geometry_suite() {
  Check ck;
  const CounterRng rng(2024, 1);
  double eik = 0.0;
  double trip = 0.0;
  double tri = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const int N = 2 + i % 8;
    const auto k = 4 * static_cast<std::uint64_t>(i);
    const Point x = random_point(rng, k, N, 6.0 * rng.uniform(k));
    const Point z = random_point(rng, k + 1, N, 6.0 * rng.uniform(k + 1));
    const Point w = random_point(rng, k + 2, N, 6.0 * rng.uniform(k + 2));
    if (geodesic_distance(x, z) > 1e-6) eik = std::max(eik, std::abs(riemannian_norm(grad_dist(x, z)) - 1.0));
    std::vector<double> dir(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j) dir[static_cast<std::size_t>(j)] = rng.normal(1000000 + 16 * k + j);
    const double r = 8.0 * rng.uniform(k + 3);
    trip = std::max(trip, std::abs(geodesic_distance(x, exp_map(x, tangent_from_frame(x, dir), r)) - r) / std::max(1.0, r));
    tri = std::min(tri, geodesic_distance(x, z) + geodesic_distance(z, w) - geodesic_distance(x, w));
  }
  ck.require(eik <= 1e-10, "eikonal deviation " + fmt("%.3g", eik));
  ck.require(trip <= 1e-10, "exp/distance round trip " + fmt("%.3g", trip));
  ck.require(tri >= -1e-10, "triangle slack " + fmt("%.3g", tri));
  ck.note("eikonal " + fmt("%.1e", eik) + ", round trip " + fmt("%.1e", trip) + ", triangle slack " + fmt("%.1e", tri));
  return ck.outcome();
}

Outcome partition_suite() {
  Check ck;
  const CounterRng rng(77, 2);
  double unity = 0.0;
  double alt = 0.0;
  int i = 0;
  for (int N : {3, 4, 5}) {
    for (int M : {2, 3, 4}) {
      const std::vector<Point> poles = polygon_poles(N, M, 4.0);
      const Partition part = Partition::make(PoleConfig::make(poles));
      Partition::Values v;
      for (int s = 0; s < 1112; ++s, ++i) {
        const auto k = static_cast<std::uint64_t>(i);
        const Point near = poles[static_cast<std::size_t>(s % M)];
        const Point x = s % 3 == 0 ? random_point(rng, k, N, 5.0 * rng.uniform(k))
                                   : Isometry::moving_to_origin(near).apply_inverse(
                                         random_point(rng, k, N, 2.5 * rng.uniform(k)));
        part.evaluate(x, v);
        double sum = 0.0;
        for (double j : v.value) sum += j * j;
        unity = std::max(unity, std::abs(sum - 1.0));
        if (const auto r = gradsum_identity_residual(part, x)) alt = std::max(alt, *r * part.scale() * part.scale() / (kPi * kPi));
      }
    }
  }
  ck.require(i >= 10000, "sample count");
  ck.require(unity <= 1e-12, "partition of unity " + fmt("%.3g", unity));
  ck.require(alt <= 1e-9, "alternate-sum residual " + fmt("%.3g", alt));
  const ReducedMaximum m = reduced_cutoff_maximum();
  ck.require(std::abs(m.value - 2.0) <= 1e-6 && std::abs(m.t - 1.0) <= 1e-6, "reduced maximum");
  int lemma_pass = 0;
  const CounterRng cfg(5, 3);
  for (int j = 0; j < 20; ++j) {
    const int N = 3 + static_cast<int>(4.0 * cfg.uniform(3 * j));
    const double lo = N - 2.0;
    const double hi = (N - 1.0) * (N - 1.0) / 4.0;
    const double lambda = lo + (hi - lo) * cfg.uniform(3 * j + 1);
    const double d = 0.5 + 5.5 * cfg.uniform(3 * j + 2);
    const LemmaBound b = lemma_bound_check(SpectralParams::make(N, lambda), on_axis(N, -d), on_axis(N, d), j + 1);
    ck.require(b.pass, "lemma bound at N=" + std::to_string(N) + " lambda=" + fmt("%.3f", lambda) + " d=" + fmt("%.3f", d));
    lemma_pass += b.pass ? 1 : 0;
  }
  ck.note("unity " + fmt("%.1e", unity) + ", alternate sum " + fmt("%.1e", alt) + ", lemma bound " +
          std::to_string(lemma_pass) + "/20");
  return ck.outcome();
}

Outcome threshold_suite() {
  Check ck;
  for (int M = 2; M <= 10; ++M) {
    ThresholdQuery q;
    q.params = SpectralParams::make(3, 1.0);
    q.M = M;
    const double closed = std::sqrt(kPi * kPi + (M + 1) / 4.0);
    ck.require(std::abs(solve_threshold(q).d_bar - closed) <= 1e-10, "N=3 closed form at M=" + std::to_string(M));
  }
  const CounterRng rng(17, 4);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    ThresholdQuery q;
    const int N = 3 + static_cast<int>(6.0 * rng.uniform(5 * i));
    q.M = 2 + static_cast<int>(8.0 * rng.uniform(5 * i + 1));
    const double lo = N - 2.0;
    const double hi = (N - 1.0) * (N - 1.0) / 4.0;
    const int kind = static_cast<int>(4.0 * rng.uniform(5 * i + 2));
    q.kind = static_cast<ThresholdKind>(kind);
    const bool poincare = q.kind == ThresholdKind::poincare_hardy || q.kind == ThresholdKind::poincare_hardy_curved;
    const double c = (q.kind == ThresholdKind::hardy_curved || q.kind == ThresholdKind::poincare_hardy_curved)
                         ? std::pow(10.0, 2.0 * rng.uniform(5 * i + 3) - 1.0)
                         : 1.0;
    if (poincare && N == 3) q.kind = kind == 1 ? ThresholdKind::hardy : ThresholdKind::hardy_curved;
    const double lambda = poincare && N > 3 ? lo + (hi - lo) * (0.05 + 0.9 * rng.uniform(5 * i + 4)) : lo;
    q.params = SpectralParams::make(N, lambda, c);
    const ThresholdSolution s = solve_threshold(q);
    const double rel = s.residual / std::abs(q.rhs());
    worst = std::max(worst, rel);
    ck.require(rel <= 1e-10, "residual at query " + std::to_string(i));
  }
  for (int N : {3, 4, 6}) {
    double prev = 0.0;
    for (int M = 2; M <= 10; ++M) {
      ThresholdQuery q;
      q.params = SpectralParams::make(N, N - 2.0);
      q.M = M;
      const double d = solve_threshold(q).d_bar;
      ck.require(d > prev, "monotonicity in M at N=" + std::to_string(N));
      prev = d;
    }
  }
  ck.note("max relative residual " + fmt("%.1e", worst));
  return ck.outcome();
}

Outcome quadrature_suite() {
  Check ck;
  for (double R : {0.5, 1.0, 2.0}) {
    QuadratureSpec q;
    q.center = Point::origin(3);
    q.radius = R;
    const double exact = kPi * (std::sinh(2.0 * R) - 2.0 * R);
    const double v = integrate_ball([](const Point&) { return 1.0; }, q, CurvatureModel(1.0)).value;
    ck.require(std::abs(v - exact) <= 1e-10 * exact, "ball volume at R=" + fmt("%.1f", R));
  }
  const Point off = on_axis(3, 0.6);
  auto f = [&off](const Point& x) { return std::exp(-geodesic_distance(x, off)); };
  QuadratureSpec q;
  q.center = Point::origin(3);
  q.radius = 1.0;
  double ratio_sum = 0.0;
  int ratios = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    q.seed = seed;
    q.spherical_samples = 256;
    const double s1 = integrate_ball(f, q, CurvatureModel(1.0)).stderr;
    q.spherical_samples = 1024;
    const double s4 = integrate_ball(f, q, CurvatureModel(1.0)).stderr;
    const double ratio = s4 / s1;
    ck.require(std::abs(ratio - 0.5) <= 0.1, "stderr ratio " + fmt("%.3f", ratio));
    ratio_sum += ratio;
    ++ratios;
  }
  QuadratureSpec t;
  t.center = Point::origin(4);
  t.radius = 1.5;
  t.spherical_samples = 512;
  const Point off4 = on_axis(4, 0.6);
  auto h = [&off4](const Point& x) { return std::cos(3.0 * geodesic_distance(x, off4)); };
  set_worker_threads(1);
  const IntegralEstimate a = integrate_ball(h, t, CurvatureModel(1.0));
  bool identical = true;
  for (int n : {2, 3, 8}) {
    set_worker_threads(n);
    const IntegralEstimate b = integrate_ball(h, t, CurvatureModel(1.0));
    identical = identical && a.value == b.value && a.stderr == b.stderr;
  }
  set_worker_threads(1);
  ck.require(identical, "thread-count dependence");
  ck.note("mean stderr ratio under 4x samples " + fmt("%.3f", ratio_sum / ratios));
  return ck.outcome();
}

struct Instance {
  Target target;
  int N;
  int M;
  double lambda;
  double c;
  double separation;  // unit model
};

double threshold_separation(ThresholdKind kind, int N, int M, double lambda, double c) {
  ThresholdQuery q;
  q.params = SpectralParams::make(N, lambda, c);
  q.M = M;
  q.kind = kind;
  // d is half the separation, in curvature -c units; poles are placed on the unit model.
  return 2.0 * 1.15 * solve_threshold(q).d_bar * std::sqrt(c);
}

Outcome inequality_suite() {
  Check ck;
  std::vector<Instance> instances;
  for (int N : {3, 4, 5}) {
    const double lo = N - 2.0;
    const double mid = 0.5 * (lo + (N - 1.0) * (N - 1.0) / 4.0);
    instances.push_back({Target::unipolar, N, 1, lo, 1.0, 0.0});
    instances.push_back({Target::two_pole, N, 2, lo, 1.0, 8.0});
    for (int M : {2, 3}) {
      instances.push_back({Target::main, N, M, lo, 1.0, 8.0});
      instances.push_back({Target::hardy_multi, N, M, lo, 1.0, threshold_separation(ThresholdKind::hardy, N, M, lo, 1.0)});
      if (N > 3) {
        instances.push_back({Target::poincare_hardy, N, M, mid, 1.0,
                             threshold_separation(ThresholdKind::poincare_hardy, N, M, mid, 1.0)});
      }
      for (double c : {0.25, 4.0}) instances.push_back({Target::curved_main, N, M, lo, c, 8.0});
      instances.push_back({Target::green_critical, N, M, lo, 1.0, 6.0});
    }
  }
  std::size_t total = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  double worst_ims = 0.0;
  int ims_checked = 0;
  std::uint64_t seed = 1;
  for (const Instance& in : instances) {
    InequalitySpec spec;
    spec.target = in.target;
    spec.params = SpectralParams::make(in.N, in.lambda, in.c);
    spec.poles = in.M == 1 ? std::vector<Point>{Point::origin(in.N)} : polygon_poles(in.N, in.M, in.separation);
    spec.quad.center = Point::origin(in.N);
    spec.quad.seed = 1000 * seed;
    const FamilyKind kind = seed % 2 == 0 ? FamilyKind::pole_bumps : FamilyKind::random_superpositions;
    const FamilySummary s = verify_family(spec, kind, 100, seed);
    total += s.reports.size();
    passed += s.passed;
    failed += s.failed;
    const std::string label = std::string(to_string(in.target)) + " N=" + std::to_string(in.N) + " M=" +
                              std::to_string(in.M) + " c=" + fmt("%g", in.c);
    ck.require(s.failed == 0, label + ": " + std::to_string(s.failed) + " fail verdicts");

    if (in.M >= 2) {
      const PoleConfig cfg = PoleConfig::make(spec.poles);
      const Partition part = Partition::make(cfg, in.c);
      const WeightDescriptor V{WeightKind::multipolar, spec.params, spec.poles, std::nullopt};
      const auto fam = sample_family(kind, cfg, in.c, 3, seed);
      for (const Superposition& u : fam) {
        const ImsDecomposition r = ims_decomposition(part, u, V, spec.quad);
        const double excess = std::abs(r.residual.value) - 3.0 * r.residual.stderr;
        const double floor = 1e-9 * std::abs(r.lhs_total.value);
        worst_ims = std::max(worst_ims, excess / std::max(floor, 1e-300));
        ck.require(excess <= floor, label + ": IMS residual " + fmt("%.3g", r.residual.value) + " vs stderr " +
                                        fmt("%.3g", r.residual.stderr));
        ++ims_checked;
      }
    }
    ++seed;
  }
  const double pass_rate = static_cast<double>(passed) / static_cast<double>(total);
  ck.require(failed == 0, "fail verdicts present");
  ck.require(pass_rate >= 0.95, "outright pass rate " + fmt("%.3f", pass_rate));
  ck.note(std::to_string(instances.size()) + " instances, " + std::to_string(total) + " members, pass rate " +
          fmt("%.4f", pass_rate) + ", " + std::to_string(failed) + " fail, " + std::to_string(ims_checked) +
          " IMS checks");
  return ck.outcome();
}

Outcome criticality_probe() {
  Check ck;
  for (int N : {3, 4, 5}) {
    for (double R : {5.0, 10.0, 20.0}) {
      const EigenResult r = bottom_eigenvalue(RadialProblem::unipolar(SpectralParams::make(N, N - 2.0), R, 4096));
      ck.require(r.bottom_eigenvalue >= -1e-6, "exact potential N=" + std::to_string(N) + " R=" + fmt("%g", R) +
                                                  " theta=" + fmt("%.3g", r.bottom_eigenvalue));
    }
  }
  std::string amplified;
  for (int N : {4, 5}) {
    const EigenResult r = bottom_eigenvalue(RadialProblem::unipolar(SpectralParams::make(N, N - 2.0), 20.0, 4096, 0.5));
    ck.require(r.bottom_eigenvalue < 0.0, "amplified potential not negative at N=" + std::to_string(N));
    amplified += (amplified.empty() ? "" : ", ") + fmt("%.3g", r.bottom_eigenvalue);
  }
  double worst = 0.0;
  for (int N : {3, 4, 5}) {
    for (double eps : {0.0, 0.5}) {
      const AssembledForms f = assemble(RadialProblem::unipolar(SpectralParams::make(N, N - 2.0), 8.0, 512, eps));
      const auto n = static_cast<Eigen::Index>(f.A.diag.size());
      Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
      Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto u = static_cast<std::size_t>(i);
        A(i, i) = f.A.diag[u];
        B(i, i) = f.B.diag[u];
        if (i + 1 < n) {
          A(i, i + 1) = A(i + 1, i) = f.A.off[u];
          B(i, i + 1) = B(i + 1, i) = f.B.off[u];
        }
      }
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, B);
      const double oracle = es.eigenvalues()(0);
      const double err = std::abs(bottom_eigenvalue(f).bottom_eigenvalue - oracle) / std::max(1.0, std::abs(oracle));
      worst = std::max(worst, err);
    }
  }
  ck.require(worst <= 1e-8, "dense oracle mismatch " + fmt("%.3g", worst));
  ck.note("amplified bottom eigenvalues " + amplified + "; dense oracle error " + fmt("%.1e", worst));
  return ck.outcome();
}

Outcome weight_comparison_suite() {
  Check ck;
  double worst = 0.0;
  for (int N : {3, 4, 5, 6}) {
    for (int M : {2, 3, 4}) {
      const SpectralParams p = SpectralParams::make(N, N - 2.0);
      const WeightComparison w = compare_weights(p, PoleConfig::make(polygon_poles(N, M, 6.0)));
      const std::string label = "N=" + std::to_string(N) + " M=" + std::to_string(M);
      const double h = (N - 2.0) * (N - 2.0);
      ck.require(std::abs(w.ours_expected - h / 4.0) <= 1e-14, label + ": ours symbolic");
      ck.require(std::abs(w.ffk_expected - h * (M - 1.0) / (M * M)) <= 1e-14, label + ": ffk symbolic");
      ck.require(std::abs(w.critical_expected - M * h / ((M + 1.0) * (M + 1.0))) <= 1e-14, label + ": W symbolic");
      for (auto [got, want] : {std::pair{w.ours, w.ours_expected}, std::pair{w.ffk, w.ffk_expected},
                               std::pair{w.critical, w.critical_expected}}) {
        const double err = std::abs(got - want);
        worst = std::max(worst, err);
        ck.require(err <= 1e-6, label + ": extracted coefficient " + fmt("%.10g", got) + " vs " + fmt("%.10g", want));
      }
      if (M == 2) {
        ck.require(std::abs(w.ours - w.ffk) <= 1e-6, label + ": M=2 coefficients differ");
        // Next order at the pole: our g coefficient D against the comparison weight's (N-1)(N-2)/M.
        ck.require(hardy_constants(p).D < (N - 1.0) * (N - 2.0) / 2.0, label + ": g coefficient ordering");
      } else {
        ck.require(w.ours > w.ffk + 1e-6, label + ": ours not larger than ffk");
      }
      const double far = (N - 1.0) * (N - 1.0) * M / ((M + 1.0) * (M + 1.0));
      ck.require(std::abs(w.critical_far_expected - far) <= 1e-14, label + ": W far-field symbolic");
      ck.require(std::abs(w.critical_far - far) <= 1e-2 * far, label + ": W far field " + fmt("%.6g", w.critical_far));
      ck.require(w.critical_far > w.ffk_far, label + ": W not larger than ffk at infinity");
    }
  }
  ck.note("max coefficient error " + fmt("%.1e", worst));
  return ck.outcome();
}

Outcome euclidean_limit() {
  Check ck;
  const double cs[] = {1e-2, 1e-4, 1e-6};
  double worst_w = 0.0;
  double worst_k = 0.0;
  for (int N : {3, 4, 5, 6}) {
    for (int M : {1, 2, 3}) {
      const auto rows = euclidean_limit_check(N, M, 1.0, 1.0, cs);
      const EuclideanLimitRow& r = rows.back();
      worst_w = std::max(worst_w, r.weight_rel_error);
      worst_k = std::max(worst_k, r.constant_rel_error);
      ck.require(r.weight_rel_error <= 1e-3, "weight N=" + std::to_string(N) + " M=" + std::to_string(M));
      ck.require(r.constant_rel_error <= 1e-3, "constant N=" + std::to_string(N) + " M=" + std::to_string(M));
      ck.require(std::abs(r.g_at_one) <= 1e-5, "g_c(1) does not vanish");
    }
  }
  ck.note("weight rel error " + fmt("%.1e", worst_w) + ", constant rel error " + fmt("%.1e", worst_k));
  return ck.outcome();
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"constants", 1.0, constants_suite},
      {"special functions", 1.0, special_function_suite},
      {"geometry", 5.0, geometry_suite},
      {"partition", 30.0, partition_suite},
      {"thresholds", 1.0, threshold_suite},
      {"quadrature", 60.0, quadrature_suite},
      {"inequalities", 600.0, inequality_suite},
      {"criticality probe", 120.0, criticality_probe},
      {"weight comparison", 60.0, weight_comparison_suite},
      {"euclidean limit", 60.0, euclidean_limit},
  };
  int failures = 0;
  int index = 1;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && secs > c.budget_seconds) {
      o.ok = false;
      o.detail = "runtime " + fmt("%.2f", secs) + " s over budget; " + o.detail;
    }
    std::printf("criterion %2d %-18s %s  %7.2f s / %g s  %s\n", index++, c.name, o.ok ? "PASS" : "FAIL", secs,
                c.budget_seconds, o.detail.c_str());
    std::fflush(stdout);
    failures += o.ok ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
