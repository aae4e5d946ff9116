#pragma once

// Quadrature checks of the unipolar and multipolar Hardy-type inequalities,
// pointwise weight comparisons and the flat-limit check.
//
// Every inequality is arranged as LHS = int |grad u|^2 + kappa int u^2 against
// RHS = int w u^2 with a target-specific constant kappa and weight w; singular
// weights are integrated about their poles.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyperhardy/coeffs.hpp"
#include "hyperhardy/quad.hpp"
#include "hyperhardy/testfn.hpp"
#include "hyperhardy/thresholds.hpp"

namespace hyperhardy {

enum class Target {
  unipolar,
  main,
  two_pole,
  hardy_multi,
  poincare_hardy,
  curved_main,
  curved_hardy,
  curved_poincare_hardy,
  green_critical,
};

const char* to_string(Target target);
Target target_from_string(const std::string& name);
bool is_curved(Target target);

struct InequalitySpec {
  Target target = Target::main;
  SpectralParams params;
  std::vector<Point> poles;  ///< a single pole for `unipolar`, M >= 2 otherwise
  QuadratureSpec quad;
  std::optional<std::vector<double>> alpha;  ///< green_critical only

  /// Structural checks plus the separation preconditions of the threshold targets.
  void validate() const;
  /// Half the minimal pole separation (curvature -c distance); 0 for one pole.
  double half_separation() const;
  /// The additive constant kappa multiplying int u^2 on the left.
  double lhs_constant() const;
  /// Weight w(x) on the right.
  double weight(const Point& x) const;
  /// Threshold the separation must reach, if the target has one.
  std::optional<ThresholdSolution> threshold() const;
};

enum class Verdict { pass, fail, inconclusive };
const char* to_string(Verdict verdict);

struct VerificationReport {
  Target target = Target::main;
  int N = 3;
  double lambda = 0.0;
  double c = 1.0;
  int M = 1;
  double d = 0.0;
  std::uint64_t seed = 0;
  double constant = 0.0;      ///< kappa
  IntegralEstimate dirichlet; ///< int |grad u|^2
  IntegralEstimate mass;      ///< int u^2
  IntegralEstimate lhs;
  IntegralEstimate rhs;
  double margin = 0.0;        ///< lhs - rhs
  double combined_stderr = 0.0;
  double scale = 0.0;         ///< int |grad u|^2 + int u^2
  double relative_margin = 0.0;
  Verdict verdict = Verdict::pass;
};

/// Applies the 3-sigma rule with an absolute floor of 1e-9 * scale.
Verdict decide(double margin, double combined_stderr, double scale);

VerificationReport verify(const InequalitySpec& spec, const Superposition& u);

struct FamilySummary {
  double min_margin = 0.0;
  double min_relative_margin = 0.0;
  std::size_t worst = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t inconclusive = 0;
  std::vector<VerificationReport> reports;
};

FamilySummary verify_family(const InequalitySpec& spec, FamilyKind kind, int count, std::uint64_t seed);

/// Near-pole d^-2 coefficients and far-field values of the three weights.
struct WeightComparison {
  int N = 3;
  int M = 2;
  double lambda = 0.0;
  double ours = 0.0;      ///< extracted coefficient of the multipolar potential
  double ffk = 0.0;       ///< of the gradient-difference weight
  double critical = 0.0;  ///< of the Green-function weight W
  double ours_expected = 0.0;
  double ffk_expected = 0.0;
  double critical_expected = 0.0;
  double far_distance = 20.0;
  double ours_far = 0.0;
  double ffk_far = 0.0;
  double critical_far = 0.0;
  double critical_far_expected = 0.0;
};

/// Extracts lim eps^2 w(exp_{y_1}(eps v)) by polynomial extrapolation in eps.
double near_pole_coefficient(const std::function<double(const Point&)>& weight, const Point& pole,
                             std::span<const double> direction);

WeightComparison compare_weights(const SpectralParams& params, const PoleConfig& poles);

struct WeightRow {
  double s = 0.0;  ///< signed distance from the first pole along the line through the first two poles
  double ours = 0.0;
  double ffk = 0.0;
  double critical = 0.0;
};

/// The three weights on `samples` cell-centered points of [-extent, D + extent].
std::vector<WeightRow> weight_line_scan(const SpectralParams& params, const PoleConfig& poles, int samples,
                                        double extent);

struct EuclideanLimitRow {
  double c = 0.0;
  double weight = 0.0;
  double euclidean_weight = 0.0;
  double weight_rel_error = 0.0;
  double constant = 0.0;
  double euclidean_constant = 0.0;
  double constant_rel_error = 0.0;
  double g_at_one = 0.0;
};

/// Curved weight at curvature distance r from a pole and the additive
/// constant for M poles with half-separation d, against their flat forms.
std::vector<EuclideanLimitRow> euclidean_limit_check(int N, int M, double d, double r,
                                                     std::span<const double> curvatures);

}  // namespace hyperhardy
