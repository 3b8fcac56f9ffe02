#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace kpunct {

// Counter-based generator built on the splitmix64 finalizer.  Every draw is a
// pure function of (seed, stream, counter), so fills can be chunked across
// threads in any order and still come out identical, and a mask or matrix of
// a given shape is fully determined by its seed.
class CounterRng {
 public:
  // Distinct streams keep independent uses of one seed decorrelated.
  enum Stream : std::uint64_t {
    kDataMask = 1,
    kKernelMask = 2,
    kNoise = 3,
    kMeans = 4,
    kFactors = 5,
    kEigInit = 6,
    kSizes = 7,
  };

  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ull))) {}

  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  std::uint64_t bits(std::uint64_t counter) const {
    return mix(key_ + counter * 0x9e3779b97f4a7c15ull);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  bool bernoulli(std::uint64_t counter, double p) const {
    return uniform(counter) < p;
  }

  // Box-Muller pair of independent standard normals; consumes one counter.
  std::pair<double, double> normal2(std::uint64_t counter) const {
    const std::uint64_t w = bits(counter);
    // Two 32-bit halves -> two uniforms; u1 is kept away from zero so the
    // logarithm stays finite.
    const double u1 =
        (static_cast<double>(w >> 32) + 0.5) * 0x1.0p-32;
    const double u2 =
        (static_cast<double>(w & 0xffffffffull) + 0.5) * 0x1.0p-32;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(t), r * std::sin(t)};
  }

  double normal(std::uint64_t counter) const { return normal2(counter).first; }

 private:
  std::uint64_t key_;
};

}  // namespace kpunct
