#pragma once

// Compactly supported test functions: finite superpositions of radial C^1
// bumps with exact values and Riemannian gradients.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hyperhardy/coeffs.hpp"
#include "hyperhardy/hypgeom.hpp"
#include "hyperhardy/quad.hpp"

namespace hyperhardy {

enum class Profile {
  polynomial,     ///< (1 - s^2)^2, s = r/R
  smoothstep,     ///< 1 - 3 s^2 + 2 s^3
  shifted_power,  ///< r^a (1 - s^2)^2, a > -(N-2)/2
};

const char* to_string(Profile profile);
Profile profile_from_string(const std::string& name);

struct RadialBump {
  Point center = Point::origin(3);
  double radius = 1.0;  ///< support radius (curvature -c distance)
  Profile profile = Profile::polynomial;
  double exponent = 0.0;  ///< a, shifted_power only

  void validate() const;
  /// Profile b(r) and its derivative b'(r); zero for r >= radius.
  double value(double r) const;
  double deriv(double r) const;
  /// True when b'(r) blows up as r -> 0.
  bool singular_at_center() const;
};

struct Superposition {
  struct Term {
    double coef = 1.0;
    RadialBump bump;
  };
  std::vector<Term> terms;

  bool empty() const { return terms.empty(); }
  void validate() const;
  /// Centers mapped by `iso`; centers landing on the origin are snapped to it.
  Superposition moved(const Isometry& iso) const;
};

/// sum_i a_i b_i(d_c(x, center_i)).
double value(const Superposition& u, const Point& x, double c = 1.0);

/// Value and gradient of u at x. The gradient is written in ambient
/// coordinates of the unit model, scaled so that its Minkowski norm is the
/// curvature -c gradient norm.
double value_and_gradient(const Superposition& u, const Point& x, double c, std::span<double> grad);

double grad_norm_sq(const Superposition& u, const Point& x, double c = 1.0);

enum class FamilyKind { pole_bumps, random_superpositions, near_optimizer };

const char* to_string(FamilyKind kind);
FamilyKind family_from_string(const std::string& name);

/// Deterministic family of `count` test functions about the given poles;
/// `scale` (curvature -c distance) sets bump radii, normally the half-separation d.
std::vector<Superposition> sample_family(FamilyKind kind, std::span<const Point> poles, double scale, double c,
                                         int count, std::uint64_t seed);
std::vector<Superposition> sample_family(FamilyKind kind, const PoleConfig& poles, double c, int count,
                                         std::uint64_t seed);

/// Integration cells for integrands built from u that may be singular at the
/// bump centers and at those poles lying within `pole_margin` of the support.
/// `pole_breakpoints` are radii about each pole where the integrand has kinks.
std::vector<Cell> integration_cells(const Superposition& u, std::span<const Point> poles, double c,
                                    double pole_margin = 0.0, std::span<const double> pole_breakpoints = {});

void serialize(std::ostream& out, std::span<const Superposition> family);
std::vector<Superposition> parse_family(std::istream& in);

}  // namespace hyperhardy
