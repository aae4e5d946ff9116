#include "hyperhardy/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hyperhardy/error.hpp"

namespace hyperhardy {

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

bool needs_unit_curvature(Target t) { return !is_curved(t) && t != Target::unipolar; }

double hardy_term(int N, double r, double c) {
  const double n = N;
  return 0.25 * (n - 2.0) * (n - 2.0) / (r * r) + 0.5 * (n - 2.0) * (n - 3.0) * g_fn(r, c);
}

double poincare_term(int N, double r, double c) {
  const double n = N;
  return 0.25 / (r * r) + 0.25 * (n - 1.0) * (n - 3.0) * inv_sinh_sq(r, c);
}

}  // namespace

const char* to_string(Target target) {
  switch (target) {
    case Target::unipolar:
      return "unipolar";
    case Target::main:
      return "main";
    case Target::two_pole:
      return "two_pole";
    case Target::hardy_multi:
      return "hardy_multi";
    case Target::poincare_hardy:
      return "poincare_hardy";
    case Target::curved_main:
      return "curved_main";
    case Target::curved_hardy:
      return "curved_hardy";
    case Target::curved_poincare_hardy:
      return "curved_poincare_hardy";
    case Target::green_critical:
      return "green_critical";
  }
  return "?";
}

Target target_from_string(const std::string& name) {
  for (auto t : {Target::unipolar, Target::main, Target::two_pole, Target::hardy_multi, Target::poincare_hardy,
                 Target::curved_main, Target::curved_hardy, Target::curved_poincare_hardy, Target::green_critical}) {
    if (name == to_string(t)) return t;
  }
  throw DomainError("unknown target '" + name + "'");
}

bool is_curved(Target target) {
  return target == Target::curved_main || target == Target::curved_hardy || target == Target::curved_poincare_hardy;
}

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "?";
}

double InequalitySpec::half_separation() const {
  if (poles.size() < 2) return 0.0;
  return PoleConfig::make(poles).d(params.c);
}

std::optional<ThresholdSolution> InequalitySpec::threshold() const {
  ThresholdQuery q;
  q.params = params;
  q.M = static_cast<int>(poles.size());
  switch (target) {
    case Target::hardy_multi:
      q.kind = ThresholdKind::hardy;
      break;
    case Target::curved_hardy:
      q.kind = ThresholdKind::hardy_curved;
      break;
    case Target::poincare_hardy:
      q.kind = ThresholdKind::poincare_hardy;
      break;
    case Target::curved_poincare_hardy:
      q.kind = ThresholdKind::poincare_hardy_curved;
      break;
    default:
      return std::nullopt;
  }
  return solve_threshold(q);
}

void InequalitySpec::validate() const {
  quad.validate();
  if (poles.empty()) throw DomainError("verify: at least one pole is required");
  const int dim = poles.front().dim();
  if (dim != params.N) throw DomainError("verify: pole dimension differs from N");
  if (target == Target::unipolar) {
    if (poles.size() != 1) throw DomainError("verify: target unipolar takes exactly one pole");
  } else if (poles.size() < 2) {
    throw DomainError(std::string("verify: target ") + to_string(target) + " needs M >= 2 poles");
  }
  if (target == Target::two_pole && poles.size() != 2) throw DomainError("verify: target two_pole needs M = 2");
  if (needs_unit_curvature(target) && params.c != 1.0) {
    throw DomainError(std::string("verify: target ") + to_string(target) + " is stated for c = 1");
  }
  if (alpha && target != Target::green_critical) throw DomainError("verify: alpha applies to green_critical only");
  if (target == Target::green_critical) {
    WeightDescriptor w{WeightKind::green_critical, params, poles, alpha};
    w.validate();
  }
  if (const auto bar = threshold()) {
    const double d = half_separation();
    if (d < bar->d_bar) {
      std::ostringstream msg;
      msg.precision(10);
      msg << "verify: target " << to_string(target) << " requires half-separation d >= " << bar->d_bar
          << " but d = " << d;
      throw DomainError(msg.str());
    }
  }
}

double InequalitySpec::lhs_constant() const {
  const double lc = params.lambda * params.c;
  switch (target) {
    case Target::unipolar:
    case Target::poincare_hardy:
    case Target::curved_poincare_hardy:
      return -lc;
    case Target::main:
    case Target::two_pole:
    case Target::curved_main: {
      const double d = half_separation();
      const double M = static_cast<double>(poles.size());
      return kPi2 / (d * d) + (M + 1.0) * ceiling_K(params, d) - lc;
    }
    case Target::hardy_multi:
    case Target::curved_hardy:
    case Target::green_critical:
      return 0.0;
  }
  return 0.0;
}

double InequalitySpec::weight(const Point& x) const {
  const double c = params.c;
  switch (target) {
    case Target::unipolar:
    case Target::main:
    case Target::two_pole:
    case Target::curved_main:
      return multipolar_potential(params, poles, x);
    case Target::hardy_multi:
    case Target::curved_hardy: {
      double w = 0.0;
      for (const Point& p : poles) w += hardy_term(params.N, curved_distance(x, p, c), c);
      return w;
    }
    case Target::poincare_hardy:
    case Target::curved_poincare_hardy: {
      double w = 0.0;
      for (const Point& p : poles) w += poincare_term(params.N, curved_distance(x, p, c), c);
      return w;
    }
    case Target::green_critical:
      return critical_weight_W(WeightDescriptor{WeightKind::green_critical, params, poles, alpha}, x);
  }
  return 0.0;
}

Verdict decide(double margin, double combined_stderr, double scale) {
  if (margin >= -3.0 * combined_stderr) return Verdict::pass;
  if (margin < -3.0 * combined_stderr - 1e-9 * scale) return Verdict::fail;
  return Verdict::inconclusive;
}

VerificationReport verify(const InequalitySpec& spec, const Superposition& u) {
  spec.validate();
  u.validate();
  VerificationReport rep;
  rep.target = spec.target;
  rep.N = spec.params.N;
  rep.lambda = spec.params.lambda;
  rep.c = spec.params.c;
  rep.M = static_cast<int>(spec.poles.size());
  rep.d = spec.half_separation();
  rep.seed = spec.quad.seed;
  rep.constant = spec.lhs_constant();
  const double c = spec.params.c;
  const std::vector<Cell> cells = integration_cells(u, spec.poles, c);
  if (cells.empty()) return rep;
  if (u.terms.front().bump.center.dim() != spec.params.N) throw DomainError("verify: test function dimension differs from N");

  const double kappa = rep.constant;
  FrameBinder field = [&spec, &u, c, kappa](const Isometry& iso) -> LocalEvaluator {
    InequalitySpec local = spec;
    for (Point& p : local.poles) p = snap_to_origin(iso.apply(p));
    const Superposition ul = u.moved(iso);
    return [local, ul, c, kappa](const Point& x, double, std::span<double> out) {
      const auto n = static_cast<std::size_t>(x.dim()) + 1;
      Point::Storage g{};
      const double v = value_and_gradient(ul, x, c, g);
      const double g2 = std::max(0.0, minkowski_inner({g.data(), n}, {g.data(), n}));
      if (v == 0.0 && g2 == 0.0) return;
      const double u2 = v * v;
      const double wu2 = u2 == 0.0 ? 0.0 : local.weight(x) * u2;
      out[0] = g2;
      out[1] = u2;
      out[2] = wu2;
      out[3] = g2 + kappa * u2 - wu2;
    };
  };
  const VectorEstimate est = integrate_cells(cells, 4, field, spec.quad, CurvatureModel(c));
  rep.dirichlet = est.component(0);
  rep.mass = est.component(1);
  rep.rhs = est.component(2);
  rep.lhs.value = rep.dirichlet.value + kappa * rep.mass.value;
  rep.lhs.stderr = std::hypot(rep.dirichlet.stderr, kappa * rep.mass.stderr);
  rep.lhs.samples_used = est.samples_used;
  rep.margin = est.value[3];
  rep.combined_stderr = est.stderr[3];
  rep.scale = rep.dirichlet.value + rep.mass.value;
  rep.relative_margin = rep.scale > 0.0 ? rep.margin / rep.scale : 0.0;
  rep.verdict = decide(rep.margin, rep.combined_stderr, rep.scale);
  return rep;
}

FamilySummary verify_family(const InequalitySpec& spec, FamilyKind kind, int count, std::uint64_t seed) {
  spec.validate();
  const double scale = spec.poles.size() >= 2 ? spec.half_separation() : 2.0;
  const std::vector<Superposition> family = sample_family(kind, spec.poles, scale, spec.params.c, count, seed);
  FamilySummary summary;
  summary.reports.reserve(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) {
    InequalitySpec member = spec;
    member.quad.seed = spec.quad.seed + i;
    VerificationReport rep = verify(member, family[i]);
    if (i == 0 || rep.margin < summary.min_margin) {
      summary.min_margin = rep.margin;
      summary.worst = i;
    }
    if (i == 0 || rep.relative_margin < summary.min_relative_margin) summary.min_relative_margin = rep.relative_margin;
    switch (rep.verdict) {
      case Verdict::pass:
        ++summary.passed;
        break;
      case Verdict::fail:
        ++summary.failed;
        break;
      case Verdict::inconclusive:
        ++summary.inconclusive;
        break;
    }
    summary.reports.push_back(std::move(rep));
  }
  return summary;
}

double near_pole_coefficient(const std::function<double(const Point&)>& weight, const Point& pole,
                             std::span<const double> direction) {
  constexpr int kLevels = 7;
  const Isometry iso = Isometry::moving_to_origin(pole);
  std::array<double, kLevels> eps{};
  std::array<double, kLevels> val{};
  for (int k = 0; k < kLevels; ++k) {
    eps[static_cast<std::size_t>(k)] = 1e-2 * std::ldexp(1.0, -k);
    const double e = eps[static_cast<std::size_t>(k)];
    val[static_cast<std::size_t>(k)] = e * e * weight(iso.apply_inverse(Point::polar(e, direction)));
  }
  // Neville's scheme evaluated at eps = 0.
  for (int m = 1; m < kLevels; ++m) {
    for (int i = kLevels - 1; i >= m; --i) {
      const auto a = static_cast<std::size_t>(i - m);
      const auto b = static_cast<std::size_t>(i);
      val[b] = (eps[a] * val[b] - eps[b] * val[b - 1]) / (eps[a] - eps[b]);
    }
  }
  return val[kLevels - 1];
}

WeightComparison compare_weights(const SpectralParams& params, const PoleConfig& poles) {
  if (params.c != 1.0) throw DomainError("compare_weights: stated for c = 1");
  const int N = params.N;
  const auto& ys = poles.poles();
  const double M = static_cast<double>(ys.size());
  const double n = N;
  WeightComparison out;
  out.N = N;
  out.M = static_cast<int>(ys.size());
  out.lambda = params.lambda;
  const WeightDescriptor W{WeightKind::green_critical, params, ys, std::nullopt};

  auto ours = [&](const Point& x) { return multipolar_potential(params, ys, x); };
  auto ffk = [&](const Point& x) { return ffk_weight(params, ys, x); };
  auto crit = [&](const Point& x) { return critical_weight_W(W, x); };

  // A generic direction at the first pole, not aligned with the pole line.
  std::vector<double> dir(static_cast<std::size_t>(N));
  for (int k = 0; k < N; ++k) dir[static_cast<std::size_t>(k)] = 1.0 + 0.37 * k * k;
  out.ours = near_pole_coefficient(ours, ys.front(), dir);
  out.ffk = near_pole_coefficient(ffk, ys.front(), dir);
  out.critical = near_pole_coefficient(crit, ys.front(), dir);
  out.ours_expected = hardy_constants(params).H;
  out.ffk_expected = (n - 2.0) * (n - 2.0) * (M - 1.0) / (M * M);
  out.critical_expected = M * (n - 2.0) * (n - 2.0) / ((M + 1.0) * (M + 1.0));

  // Far field: distance far_distance beyond the first pole, away from the others.
  const Isometry iso = Isometry::moving_to_origin(ys.front());
  std::vector<double> away(static_cast<std::size_t>(N), 0.0);
  for (std::size_t j = 1; j < ys.size(); ++j) {
    const Point yj = iso.apply(ys[j]);
    const auto s = yj.spatial();
    double norm = 0.0;
    for (double v : s) norm += v * v;
    norm = std::sqrt(norm);
    for (std::size_t k = 0; k < away.size(); ++k) away[k] -= s[k] / norm;
  }
  double norm = 0.0;
  for (double v : away) norm += v * v;
  if (!(norm > 1e-20)) {
    away = dir;
  }
  const Point far = iso.apply_inverse(Point::polar(out.far_distance, away));
  out.ours_far = ours(far);
  out.ffk_far = ffk(far);
  out.critical_far = crit(far);
  out.critical_far_expected = M * (n - 1.0) * (n - 1.0) / ((M + 1.0) * (M + 1.0));
  return out;
}

std::vector<WeightRow> weight_line_scan(const SpectralParams& params, const PoleConfig& poles, int samples,
                                        double extent) {
  if (samples < 1) throw DomainError("weight scan: samples must be >= 1");
  if (!(extent >= 0.0)) throw DomainError("weight scan: extent must be >= 0");
  const auto& ys = poles.poles();
  const double sc = std::sqrt(params.c);
  const Isometry iso = Isometry::moving_to_origin(ys[0]);
  const Point y2 = iso.apply(ys[1]);
  const double D = geodesic_distance(ys[0], ys[1]) / sc;
  std::vector<double> dir(y2.spatial().begin(), y2.spatial().end());
  std::vector<double> back(dir);
  for (double& v : back) v = -v;
  const WeightDescriptor W{WeightKind::green_critical, params, ys, std::nullopt};
  std::vector<WeightRow> rows;
  rows.reserve(static_cast<std::size_t>(samples));
  const double lo = -extent;
  const double span = D + 2.0 * extent;
  auto guarded = [](auto&& f) {
    try {
      return f();
    } catch (const DomainError&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  for (int j = 0; j < samples; ++j) {
    WeightRow row;
    row.s = lo + span * (j + 0.5) / samples;
    const Point x = iso.apply_inverse(Point::polar(sc * std::abs(row.s), row.s >= 0.0 ? dir : back));
    row.ours = guarded([&] { return multipolar_potential(params, ys, x); });
    row.ffk = guarded([&] { return ffk_weight(params, ys, x); });
    row.critical = params.c == 1.0 ? guarded([&] { return critical_weight_W(W, x); }) : std::nan("");
    rows.push_back(row);
  }
  return rows;
}

std::vector<EuclideanLimitRow> euclidean_limit_check(int N, int M, double d, double r,
                                                     std::span<const double> curvatures) {
  if (!(d > 0.0) || !(r > 0.0)) throw DomainError("euclidean limit: d and r must be > 0");
  if (M < 1) throw DomainError("euclidean limit: M must be >= 1");
  std::vector<EuclideanLimitRow> rows;
  const double n = N;
  for (double c : curvatures) {
    const SpectralParams params = SpectralParams::make(N, n - 2.0, c);
    EuclideanLimitRow row;
    row.c = c;
    row.weight = radial_potential(params, r);
    row.euclidean_weight = 0.25 * (n - 2.0) * (n - 2.0) / (r * r);
    row.weight_rel_error = std::abs(row.weight - row.euclidean_weight) / row.euclidean_weight;
    row.constant = kPi2 / (d * d) + (M + 1.0) * ceiling_K(params, d) - params.lambda * c;
    row.euclidean_constant = (4.0 * kPi2 + (M + 1.0) * (n - 2.0) * (n - 2.0)) / (4.0 * d * d);
    row.constant_rel_error = std::abs(row.constant - row.euclidean_constant) / row.euclidean_constant;
    row.g_at_one = g_fn(1.0, c);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace hyperhardy
