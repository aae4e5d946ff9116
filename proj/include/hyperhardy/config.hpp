#pragma once

// Run configuration files: flat `key = value` lines, `#` comments, a
// mandatory `schema = 1` line. `pole` may repeat; every other key appears at
// most once, and unknown keys are rejected.
//
// Points are written either as geodesic polar coordinates about the base
// point, `polar <r> <v_1> ... <v_N>` (r a curvature -c distance, v a direction
// in the frame carried to the base point by the canonical boost), or as raw
// hyperboloid coordinates, `raw <x_0> ... <x_N>` on the unit model.

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>

#include "hyperhardy/error.hpp"
#include "hyperhardy/spectral.hpp"
#include "hyperhardy/testfn.hpp"
#include "hyperhardy/verify.hpp"

namespace hyperhardy {

inline constexpr int kConfigSchema = 1;

/// A configuration that cannot be parsed; the message names the field.
class ConfigError : public DomainError {
 public:
  using DomainError::DomainError;
};

enum class RunMode { inequality, spectrum };
enum class Expectation { none, negative, nonnegative };

const char* to_string(RunMode mode);
const char* to_string(Expectation expectation);

struct RunConfig {
  RunMode mode = RunMode::inequality;
  std::uint64_t seed = 1;
  std::string output;  ///< report file name, relative to the output directory

  // mode = inequality
  InequalitySpec spec;
  FamilyKind family = FamilyKind::pole_bumps;
  int count = 10;

  // mode = spectrum
  RadialProblem problem;
  double epsilon = 0.0;  ///< the potential is (1 + epsilon) V
  Expectation expect = Expectation::none;
};

/// Parses a point in the `polar ...` / `raw ...` notation.
Point parse_point(const std::string& text, int N, double c, const Point& base);

RunConfig parse_config(std::istream& in, const std::string& source = "config");
RunConfig load_config(const std::filesystem::path& path);

}  // namespace hyperhardy
