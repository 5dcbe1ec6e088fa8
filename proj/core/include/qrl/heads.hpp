#pragma once

#include <span>
#include <vector>

#include "qrl/rng.hpp"

namespace qrl {

/// tanh-squashed Gaussian policy head (SAC).
struct SquashedGaussianConfig {
  double log_std_min = -20.0;
  double log_std_max = 2.0;
  double eps = 1e-6;  // numerical floor inside the tanh log-det correction
};

struct SquashedSample {
  std::vector<double> action;    // strictly inside (-1, 1)
  std::vector<double> pre_tanh;  // mean + std * noise
  double log_prob = 0;
};

/// Samples a = tanh(mean + std * eps) with std = exp(clamp(log_std_raw)) and
/// returns the log-density including the tanh change-of-variables term
///   log pi(a) = sum_i [ logN(u_i; mean_i, std_i) - log(1 - a_i^2 + eps) ].
/// Deterministic under a fixed rng state. Throws std::invalid_argument on
/// non-finite head outputs.
SquashedSample sample_squashed(std::span<const double> mean, std::span<const double> log_std_raw,
                               Rng& rng, const SquashedGaussianConfig& cfg = {});

/// As above with caller-provided standard-normal noise (one per dimension).
SquashedSample squash_with_noise(std::span<const double> mean,
                                 std::span<const double> log_std_raw,
                                 std::span<const double> noise,
                                 const SquashedGaussianConfig& cfg = {});

/// Log-density of a squashed sample reconstructed from its pre-tanh value.
double squashed_log_prob(std::span<const double> mean, std::span<const double> log_std_raw,
                         std::span<const double> pre_tanh,
                         const SquashedGaussianConfig& cfg = {});

/// Diagonal-Gaussian helpers (PPO policy with state-independent log-std).
double diag_gaussian_log_prob(std::span<const double> mean, std::span<const double> log_std,
                              std::span<const double> action);
double diag_gaussian_entropy(std::span<const double> log_std);

}  // namespace qrl
