#pragma once

// Portable random draws on top of std::mt19937_64. The standard distribution
// classes are implementation-defined, so anything that feeds a reproducible
// output goes through these helpers instead.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <utility>

namespace citepred::rng {

using Engine = std::mt19937_64;

// Uniform in [0, 1) with 53 random bits.
inline double uniform01(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, bound) by rejection; bound must be positive.
inline std::uint64_t below(Engine& eng, std::uint64_t bound) {
  const std::uint64_t limit = bound * (UINT64_MAX / bound);
  std::uint64_t x = eng();
  while (x >= limit) x = eng();
  return x % bound;
}

// Box-Muller; one draw per call keeps the stream position easy to reason about.
inline double normal(Engine& eng, double mean = 0.0, double sd = 1.0) {
  double u1 = uniform01(eng);
  while (u1 <= 0.0) u1 = uniform01(eng);
  const double u2 = uniform01(eng);
  return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Knuth's product method; fine for the small means used here.
inline std::uint64_t poisson(Engine& eng, double mean) {
  if (mean <= 0.0) return 0;
  const double limit = std::exp(-mean);
  std::uint64_t k = 0;
  double p = uniform01(eng);
  while (p > limit) {
    ++k;
    p *= uniform01(eng);
  }
  return k;
}

template <class T>
void shuffle(std::span<T> items, Engine& eng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = below(eng, i);
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace citepred::rng
