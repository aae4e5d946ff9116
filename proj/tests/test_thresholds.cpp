#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hyperhardy/error.hpp"
#include "hyperhardy/rng.hpp"
#include "hyperhardy/thresholds.hpp"

using namespace hyperhardy;

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

ThresholdQuery query(ThresholdKind kind, int N, int M, double lambda, double c = 1.0) {
  ThresholdQuery q;
  q.params = SpectralParams::make(N, lambda, c);
  q.M = M;
  q.kind = kind;
  return q;
}

}  // namespace

TEST_CASE("lhs for N = 3 collapses to a single inverse square") {
  for (int M = 2; M <= 6; ++M) {
    const ThresholdQuery q = query(ThresholdKind::hardy, 3, M, 1.0);
    for (double d : {0.1, 1.0, 7.0}) {
      CHECK(threshold_lhs(q, d) == doctest::Approx((kPi2 + (M + 1) / 4.0) / (d * d)).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(threshold_lhs(query(ThresholdKind::hardy, 3, 2, 1.0), 0.0), DomainError);
}

TEST_CASE("lhs is strictly decreasing, diverges at 0 and vanishes at infinity") {
  for (auto kind : {ThresholdKind::hardy, ThresholdKind::poincare_hardy, ThresholdKind::hardy_curved,
                    ThresholdKind::poincare_hardy_curved}) {
    for (int N : {3, 4, 7}) {
      const ThresholdQuery q = query(kind, N, 3, N - 2.0, 2.5);
      double prev = INFINITY;
      for (int i = 0; i <= 500; ++i) {
        const double d = 1e-2 * std::pow(1e5, i / 500.0);
        const double v = threshold_lhs(q, d);
        CHECK(v < prev);
        prev = v;
      }
      CHECK(threshold_lhs(q, 1e-6) > 1e12);
      CHECK(threshold_lhs(q, 1e6) < 1e-3);
      CHECK(threshold_lhs(q, 1e8) < 2e-2 * threshold_lhs(q, 1e6));
    }
  }
}

TEST_CASE("closed forms for N = 3") {
  CHECK(solve_threshold(query(ThresholdKind::hardy, 3, 2, 1.0)).d_bar == doctest::Approx(3.25877).epsilon(1e-5));
  CHECK(solve_threshold(query(ThresholdKind::hardy, 3, 5, 1.0)).d_bar == doctest::Approx(3.37188).epsilon(1e-5));
  for (int M = 2; M <= 10; ++M) {
    const double d = solve_threshold(query(ThresholdKind::hardy, 3, M, 1.0)).d_bar;
    CHECK(std::abs(d - std::sqrt(kPi2 + (M + 1) / 4.0)) <= 1e-10);
  }
}

TEST_CASE("solver residuals on random queries") {
  const CounterRng rng(31, 7);
  for (int i = 0; i < 50; ++i) {
    const auto k = static_cast<std::uint64_t>(6 * i);
    const auto kind = static_cast<ThresholdKind>(rng.bits(k) % 4);
    const int N = 3 + static_cast<int>(rng.bits(k + 1) % 8);
    const int M = 2 + static_cast<int>(rng.bits(k + 2) % 9);
    const double lo = N - 2.0;
    const double hi = 0.25 * (N - 1) * (N - 1);
    double lambda = lo + (hi - lo) * rng.uniform(k + 3);
    if (lambda >= hi) lambda = lo;
    if (N == 3 && (kind == ThresholdKind::poincare_hardy || kind == ThresholdKind::poincare_hardy_curved)) continue;
    const double c = std::exp(2.0 * rng.uniform(k + 4) - 1.0);
    const ThresholdQuery q = query(kind, N, M, lambda, c);
    const ThresholdSolution s = solve_threshold(q);
    CHECK(s.d_bar > 0.0);
    CHECK(s.residual <= 1e-10 * q.rhs());
    CHECK(std::abs(threshold_lhs(q, s.d_bar) - q.rhs()) <= 1e-10 * q.rhs());
  }
}

TEST_CASE("threshold grows with the number of poles") {
  for (auto kind : {ThresholdKind::hardy, ThresholdKind::poincare_hardy}) {
    for (int N : {4, 5, 8}) {
      double prev = 0.0;
      for (int M = 2; M <= 10; ++M) {
        const double d = solve_threshold(query(kind, N, M, N - 2.0)).d_bar;
        CHECK(d > prev);
        prev = d;
      }
    }
  }
}

TEST_CASE("curved hardy threshold scales like 1/sqrt(c) for N = 3") {
  const double base = solve_threshold(query(ThresholdKind::hardy_curved, 3, 3, 1.0, 1.0)).d_bar;
  for (double c : {0.01, 0.25, 4.0, 100.0}) {
    const double d = solve_threshold(query(ThresholdKind::hardy_curved, 3, 3, 1.0, c)).d_bar;
    CHECK(d * std::sqrt(c) == doctest::Approx(base).epsilon(1e-10));
  }
}

TEST_CASE("empty threshold condition is rejected") {
  CHECK_THROWS_AS(solve_threshold(query(ThresholdKind::poincare_hardy, 4, 2, 2.25)), DomainError);
  CHECK_THROWS_AS(solve_threshold(query(ThresholdKind::poincare_hardy_curved, 3, 2, 1.0, 2.0)), DomainError);
  ThresholdQuery q = query(ThresholdKind::hardy, 4, 2, 2.0);
  q.M = 1;
  CHECK_THROWS_AS(solve_threshold(q), DomainError);
  CHECK(std::isfinite(solve_threshold(query(ThresholdKind::poincare_hardy, 4, 2, 2.24)).d_bar));
}

TEST_CASE("linear leading power is available for comparison") {
  ThresholdQuery q = query(ThresholdKind::poincare_hardy, 5, 3, 3.5);
  const double squared = solve_threshold(q).d_bar;
  q.leading = LeadingPower::linear;
  const ThresholdSolution linear = solve_threshold(q);
  CHECK(linear.residual <= 1e-10 * q.rhs());
  CHECK(linear.d_bar != doctest::Approx(squared));
}

TEST_CASE("kind names round trip") {
  for (auto kind : {ThresholdKind::hardy, ThresholdKind::poincare_hardy, ThresholdKind::hardy_curved,
                    ThresholdKind::poincare_hardy_curved}) {
    CHECK(threshold_kind_from_string(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(threshold_kind_from_string("nope"), DomainError);
}
