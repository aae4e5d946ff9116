#pragma once

// Minimal pole half-separations above which the multipolar Hardy and
// Poincare-Hardy corollaries hold: the unique root d of lhs(d) = rhs, where
//   lhs(d) = pi^2/d^p + (M+1) * bracket(d)
// and bracket/rhs depend on the threshold kind.

#include <string>

#include "hyperhardy/coeffs.hpp"

namespace hyperhardy {

enum class ThresholdKind { hardy, poincare_hardy, hardy_curved, poincare_hardy_curved };

/// Power of d in the leading pi^2 term; `linear` evaluates pi^2/d instead of
/// pi^2/d^2 and exists only for sensitivity comparisons.
enum class LeadingPower { squared, linear };

struct ThresholdQuery {
  SpectralParams params;
  int M = 2;
  ThresholdKind kind = ThresholdKind::hardy;
  LeadingPower leading = LeadingPower::squared;

  /// Curvature used by the kind: params.c for the curved kinds, 1 otherwise.
  double curvature() const;
  double rhs() const;
  void validate() const;
};

double threshold_lhs(const ThresholdQuery& query, double d);

struct ThresholdSolution {
  double d_bar = 0.0;
  double residual = 0.0;  ///< |lhs(d_bar) - rhs|
  int iterations = 0;
};

ThresholdSolution solve_threshold(const ThresholdQuery& query);

const char* to_string(ThresholdKind kind);
ThresholdKind threshold_kind_from_string(const std::string& name);

}  // namespace hyperhardy
