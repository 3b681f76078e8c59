#pragma once

#include <cstdint>
#include <random>

namespace oppnet {

/// SplitMix64 finalizer. Used to derive independent per-replication seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of replication r: mix_seed(mix_seed(seed) XOR r). Depends only on
/// (seed, r), so adding replications never perturbs earlier ones. The base
/// seed is mixed first; a raw seed XOR r maps small seeds onto the same set of
/// replications.
constexpr std::uint64_t replication_seed(std::uint64_t seed, std::uint64_t r) {
  return mix_seed(mix_seed(seed) ^ r);
}

/// mt19937_64 with a portable uniform draw (the standard distributions are
/// implementation-defined, which would break cross-toolchain reproducibility).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace oppnet
