#pragma once

// Pole-centered partition of unity J_1..J_M, J_{M+1} built from the sine
// cutoff, and the localization identity for the form
// <Lu, u> = int |grad u|^2 - int V u^2.
//
// Members are indexed from 0; index M is the complement J_{M+1}.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hyperhardy/coeffs.hpp"
#include "hyperhardy/quad.hpp"
#include "hyperhardy/testfn.hpp"

namespace hyperhardy {

/// J(t) = 1 on [0, 1/2], sin(pi t) on [1/2, 1], 0 beyond.
double cutoff(double t);
/// J'(t); right limits at the breakpoints.
double cutoff_deriv(double t);
/// sqrt(1 - J(t)^2) written as a smooth profile: 0, -cos(pi t), 1.
double cutoff_complement(double t);
double cutoff_complement_deriv(double t);

class Partition {
 public:
  /// Scale d is half the minimal pole separation (curvature -c distance).
  static Partition make(const PoleConfig& poles, double c = 1.0);

  std::size_t size() const { return poles_.size() + 1; }
  std::size_t complement_index() const { return poles_.size(); }
  double scale() const { return d_; }
  double curvature() const { return c_; }
  const std::vector<Point>& poles() const { return poles_; }

  struct Values {
    std::vector<double> value;           ///< J_k
    std::vector<double> complement;      ///< sqrt(1 - J_k^2), k < M
    std::vector<double> quotient;        ///< |grad J_k|^2 / (1 - J_k^2), k < M (0 where grad J_k = 0)
    std::vector<Point::Storage> grad;    ///< ambient gradients (curvature -c norm)
  };

  /// All members at x; `poles_in_frame` are the poles expressed in the frame of x.
  void evaluate(const Point& x, std::span<const Point> poles_in_frame, Values& out) const;
  void evaluate(const Point& x, Values& out) const { evaluate(x, poles_, out); }

  double member_value(std::size_t k, const Point& x) const;
  double member_gradsq(std::size_t k, const Point& x) const;

 private:
  std::vector<Point> poles_;
  double d_ = 0.0;
  double d_unit_ = 0.0;
  double c_ = 1.0;
};

/// |sum_k |grad J_k|^2 - sum_{k<M} |grad J_k|^2 / (1 - J_k^2)|, or nothing at
/// points where some 1 - J_k^2 underflows the guard while grad J_k != 0.
std::optional<double> gradsum_identity_residual(const Partition& partition, const Point& x);

struct ReducedMaximum {
  double t = 0.0;
  double value = 0.0;
};

/// max over [1/2, 1] of cos^2(pi t) (t^-2 + (2 - t)^-2), by grid scan and golden-section refinement.
ReducedMaximum reduced_cutoff_maximum();

struct LemmaBound {
  double supremum = 0.0;
  double bound = 0.0;
  bool pass = false;
};

/// Two-pole supremum of sum_k |grad J_k|^2/(1 - J_k^2) + (1 - J_1^2 - J_2^2) V over
/// B(y1, d) u B(y2, d), estimated on radial rays, against pi^2/d^2 + 2 K(lambda, d).
LemmaBound lemma_bound_check(const SpectralParams& params, const Point& y1, const Point& y2, std::uint64_t seed = 1,
                             int rays = 64, int nodes_per_ray = 2048);

struct ImsDecomposition {
  IntegralEstimate lhs_total;      ///< int |grad u|^2 - int V u^2
  IntegralEstimate localized_sum;  ///< sum_{k<M} <L(J_k u), J_k u>
  IntegralEstimate remainder;      ///< R_M
  IntegralEstimate residual;       ///< lhs_total - localized_sum - remainder
};

ImsDecomposition ims_decomposition(const Partition& partition, const Superposition& u, const WeightDescriptor& V,
                                   const QuadratureSpec& quad);

}  // namespace hyperhardy
