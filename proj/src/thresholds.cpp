#include "hyperhardy/thresholds.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hyperhardy/error.hpp"

namespace hyperhardy {

namespace {

bool is_poincare(ThresholdKind kind) {
  return kind == ThresholdKind::poincare_hardy || kind == ThresholdKind::poincare_hardy_curved;
}

}  // namespace

double ThresholdQuery::curvature() const {
  return (kind == ThresholdKind::hardy_curved || kind == ThresholdKind::poincare_hardy_curved) ? params.c : 1.0;
}

double ThresholdQuery::rhs() const {
  const double c = curvature();
  if (is_poincare(kind)) return (params.poincare_constant() - params.lambda) * c;
  return (params.N - 2.0) * c;
}

void ThresholdQuery::validate() const {
  if (M < 2) throw DomainError("threshold: M must be >= 2");
  if (!(rhs() > 0.0)) {
    throw DomainError("empty threshold condition: right side ((N-1)^2/4 - lambda) c must be > 0");
  }
}

double threshold_lhs(const ThresholdQuery& query, double d) {
  if (!(d > 0.0)) throw DomainError("threshold lhs: d must be > 0");
  const double c = query.curvature();
  const double n = query.params.N;
  const double lead = query.leading == LeadingPower::squared ? std::numbers::pi * std::numbers::pi / (d * d)
                                                             : std::numbers::pi * std::numbers::pi / d;
  double bracket = 0.0;
  if (is_poincare(query.kind)) {
    bracket = 0.25 / (d * d) + 0.25 * (n - 1.0) * (n - 3.0) * inv_sinh_sq(0.5 * d, c);
  } else {
    bracket = 0.25 * (n - 2.0) * (n - 2.0) / (d * d) + 0.5 * (n - 3.0) * (n - 2.0) * g_fn(0.5 * d, c);
  }
  return lead + (query.M + 1.0) * bracket;
}

ThresholdSolution solve_threshold(const ThresholdQuery& query) {
  query.validate();
  const double target = query.rhs();
  auto f = [&](double d) { return threshold_lhs(query, d) - target; };

  // lhs is strictly decreasing: expand from d = 1 until the root is bracketed.
  double lo = 1.0;
  double hi = 1.0;
  int guard = 0;
  while (f(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 200) throw NumericalError("threshold: failed to bracket root");
  }
  while (f(lo) < 0.0) {
    hi = lo;
    lo *= 0.5;
    if (++guard > 400) throw NumericalError("threshold: failed to bracket root");
  }
  ThresholdSolution sol;
  while (hi - lo > 1e-15 * hi && sol.iterations < 200) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++sol.iterations;
  }
  sol.d_bar = 0.5 * (lo + hi);
  sol.residual = std::abs(f(sol.d_bar));
  return sol;
}

const char* to_string(ThresholdKind kind) {
  switch (kind) {
    case ThresholdKind::hardy:
      return "hardy";
    case ThresholdKind::poincare_hardy:
      return "poincare-hardy";
    case ThresholdKind::hardy_curved:
      return "hardy-curved";
    case ThresholdKind::poincare_hardy_curved:
      return "poincare-hardy-curved";
  }
  return "?";
}

ThresholdKind threshold_kind_from_string(const std::string& name) {
  for (auto k : {ThresholdKind::hardy, ThresholdKind::poincare_hardy, ThresholdKind::hardy_curved,
                 ThresholdKind::poincare_hardy_curved}) {
    if (name == to_string(k)) return k;
  }
  throw DomainError("unknown threshold kind '" + name + "'");
}

}  // namespace hyperhardy
