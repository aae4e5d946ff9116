#pragma once

// Counter-based random numbers: every draw is a pure function of
// (seed, stream, index), so parallel evaluation order never changes results.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace hyperhardy {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(seed ^ (stream * 0xd1b54a32d192ed03ULL)) {}

  /// Derives an independent keyed generator.
  CounterRng substream(std::uint64_t stream) const { return CounterRng(splitmix64(key_), stream); }

  std::uint64_t bits(std::uint64_t index) const { return splitmix64(splitmix64(key_ + index) ^ index); }

  /// Uniform in the open interval (0, 1).
  double uniform(std::uint64_t index) const { return (static_cast<double>(bits(index) >> 11) + 0.5) * 0x1.0p-53; }

  /// Standard normal (Box-Muller over two consecutive counters).
  double normal(std::uint64_t index) const {
    const double u1 = uniform(2 * index);
    const double u2 = uniform(2 * index + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t key_;
};

}  // namespace hyperhardy
