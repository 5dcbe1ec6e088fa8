#include "qrl/heads.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qrl {

namespace {
constexpr double kLogSqrt2Pi = 0.9189385332046727;  // log(sqrt(2*pi))
// largest double strictly below 1; keeps squashed actions inside (-1, 1)
const double kOneBelow = std::nextafter(1.0, 0.0);

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + " is not finite");
}
}  // namespace

SquashedSample squash_with_noise(std::span<const double> mean,
                                 std::span<const double> log_std_raw,
                                 std::span<const double> noise,
                                 const SquashedGaussianConfig& cfg) {
  if (mean.size() != log_std_raw.size() || mean.size() != noise.size())
    throw std::invalid_argument("squash_with_noise: dimension mismatch");
  check_finite(mean, "squashed head mean");
  check_finite(log_std_raw, "squashed head log-std");

  SquashedSample s;
  s.action.resize(mean.size());
  s.pre_tanh.resize(mean.size());
  double logp = 0.0;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    const double ls = std::clamp(log_std_raw[i], cfg.log_std_min, cfg.log_std_max);
    const double std = std::exp(ls);
    const double u = mean[i] + std * noise[i];
    double a = std::tanh(u);
    a = std::clamp(a, -kOneBelow, kOneBelow);
    s.pre_tanh[i] = u;
    s.action[i] = a;
    const double z = (u - mean[i]) / std;
    logp += -0.5 * z * z - ls - kLogSqrt2Pi;
    logp -= std::log(1.0 - a * a + cfg.eps);
  }
  s.log_prob = logp;
  return s;
}

SquashedSample sample_squashed(std::span<const double> mean, std::span<const double> log_std_raw,
                               Rng& rng, const SquashedGaussianConfig& cfg) {
  std::vector<double> noise(mean.size());
  rng.fill_normal(noise);
  return squash_with_noise(mean, log_std_raw, noise, cfg);
}

double squashed_log_prob(std::span<const double> mean, std::span<const double> log_std_raw,
                         std::span<const double> pre_tanh, const SquashedGaussianConfig& cfg) {
  if (mean.size() != log_std_raw.size() || mean.size() != pre_tanh.size())
    throw std::invalid_argument("squashed_log_prob: dimension mismatch");
  double logp = 0.0;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    const double ls = std::clamp(log_std_raw[i], cfg.log_std_min, cfg.log_std_max);
    const double std = std::exp(ls);
    const double z = (pre_tanh[i] - mean[i]) / std;
    const double a = std::clamp(std::tanh(pre_tanh[i]), -kOneBelow, kOneBelow);
    logp += -0.5 * z * z - ls - kLogSqrt2Pi;
    logp -= std::log(1.0 - a * a + cfg.eps);
  }
  return logp;
}

double diag_gaussian_log_prob(std::span<const double> mean, std::span<const double> log_std,
                              std::span<const double> action) {
  if (mean.size() != log_std.size() || mean.size() != action.size())
    throw std::invalid_argument("diag_gaussian_log_prob: dimension mismatch");
  double logp = 0.0;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    const double std = std::exp(log_std[i]);
    const double z = (action[i] - mean[i]) / std;
    logp += -0.5 * z * z - log_std[i] - kLogSqrt2Pi;
  }
  return logp;
}

double diag_gaussian_entropy(std::span<const double> log_std) {
  double h = 0.0;
  for (double ls : log_std) h += ls + 0.5 * (1.0 + std::log(2.0 * std::numbers::pi));
  return h;
}

}  // namespace qrl
