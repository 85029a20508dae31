#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "cirelax/distribution.hpp"

namespace cirelax {

/// Identifies the sampling scheme; bump whenever sampled tables change.
inline constexpr const char* kSamplerVersion = "mt19937_64/exp-spacing/v1";

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Seed of the i-th independent trial under a root seed.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t i) { return splitmix64(root ^ splitmix64(i)); }

/// Platform-independent draws on top of std::mt19937_64 (whose output
/// sequence is fixed by the standard, unlike the std distributions).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("empty range");
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t r;
    do r = engine_(); while (r >= limit);
    return r % bound;
  }
  bool chance(double p) { return uniform() < p; }
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// A strictly positive distribution drawn uniformly from the simplex by
/// normalizing i.i.d. exponential spacings. Deterministic in `seed`.
inline JointDistribution<double> random_distribution(std::vector<int> domain_sizes, std::uint64_t seed) {
  std::size_t outcomes = 1;
  for (int c : domain_sizes) {
    if (c < 1) throw std::invalid_argument("domain sizes must be positive");
    outcomes *= static_cast<std::size_t>(c);
    if (outcomes > kMaxOutcomes) throw std::length_error("outcome count exceeds 2^20");
  }
  Rng rng(seed);
  std::vector<double> weights(outcomes);
  double total = 0.0;
  for (auto& w : weights) {
    double u;
    do u = rng.uniform(); while (u == 0.0);
    w = -std::log(u);
    total += w;
  }
  for (auto& w : weights) w /= total;
  return JointDistribution<double>(std::move(domain_sizes), std::move(weights));
}

inline JointDistribution<double> random_distribution(int n, std::uint64_t seed, int cardinality = 2) {
  return random_distribution(std::vector<int>(static_cast<std::size_t>(n), cardinality), seed);
}

}  // namespace cirelax
