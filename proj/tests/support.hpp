#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "hyperhardy/hypgeom.hpp"
#include "hyperhardy/rng.hpp"

namespace hyperhardy::testing {

/// Point at unit-model distance r from the origin in a random direction.
inline Point random_point(const CounterRng& rng, std::uint64_t index, int N, double r) {
  std::vector<double> dir(static_cast<std::size_t>(N));
  for (int k = 0; k < N; ++k) dir[static_cast<std::size_t>(k)] = rng.normal(index * kMaxDim + static_cast<std::uint64_t>(k));
  return Point::polar(r, dir);
}

/// Vertices of a regular M-gon in the plane of the first two axes with
/// pairwise minimal distance `separation` (unit model).
inline std::vector<Point> polygon_poles(int N, int M, double separation) {
  std::vector<Point> out;
  const double pi = 3.14159265358979323846;
  const double rho = M == 2 ? 0.5 * separation : std::asinh(std::sinh(0.5 * separation) / std::sin(pi / M));
  for (int k = 0; k < M; ++k) {
    std::vector<double> dir(static_cast<std::size_t>(N), 0.0);
    dir[0] = std::cos(2.0 * pi * k / M);
    dir[1] = std::sin(2.0 * pi * k / M);
    out.push_back(Point::polar(rho, dir));
  }
  return out;
}

inline Point on_axis(int N, double t) {
  std::vector<double> dir(static_cast<std::size_t>(N), 0.0);
  dir[0] = t >= 0.0 ? 1.0 : -1.0;
  return Point::polar(std::abs(t), dir);
}

}  // namespace hyperhardy::testing
