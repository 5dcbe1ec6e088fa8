#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace qrl {

/// Seeded generator with hand-rolled distributions.
///
/// std::uniform_real_distribution and std::normal_distribution are
/// implementation-defined, so sampling goes through fixed arithmetic on raw
/// mt19937_64 output instead; identical seeds give identical streams on any
/// conforming standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n), unbiased via power-of-two rejection.
  std::uint64_t uniform_int(std::uint64_t n);

  /// Standard normal via Box-Muller (second deviate cached).
  double normal();

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  void fill_normal(std::span<double> out) {
    for (double& x : out) x = normal();
  }

  /// In-place Fisher-Yates shuffle (std::shuffle is implementation-defined).
  template <typename T>
  void shuffle(std::span<T> v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_int(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  std::uint64_t raw() { return engine_(); }

  /// Derives an independent stream seed (splitmix64 over seed ^ salt).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t salt);

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace qrl
