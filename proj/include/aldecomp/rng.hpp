#pragma once

#include <cmath>
#include <cstdint>

#include "aldecomp/errors.hpp"

namespace aldecomp {

// Counter-based deterministic generator: the k-th raw output is a pure
// function of (seed, k), so streams are reproducible and cheap to split.
// The mixing function is splitmix64; bounded draws use mask-and-reject,
// which is unbiased and avoids any floating point or platform dependence.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  static std::uint64_t mix(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + counter * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t next_u64() { return mix(seed_, counter_++); }

  // Uniform on {0, ..., bound-1}.
  std::uint64_t uniform_below(std::uint64_t bound) {
    if (bound == 0) throw InvalidArgument("uniform_below: bound must be positive");
    if (bound == 1) return 0;
    std::uint64_t mask = ~0ull >> __builtin_clzll(bound - 1);
    std::uint64_t r;
    do {
      r = next_u64() & mask;
    } while (r >= bound);
    return r;
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform_real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform_real(); }

  // Standard normal via Box-Muller; consumes two raw draws per call.
  double normal() {
    double u1 = uniform_real();
    double u2 = uniform_real();
    while (u1 == 0.0) u1 = uniform_real();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace aldecomp
