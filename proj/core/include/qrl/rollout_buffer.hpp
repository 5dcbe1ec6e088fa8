#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qrl/obs_store.hpp"
#include "qrl/quant.hpp"

namespace qrl {

/// Fixed-length on-policy rollout storage, cleared and refilled every
/// training iteration. Observations go through an ObsStore (bit-packed when
/// a scheme is given); actions, rewards, value estimates, log-probabilities,
/// advantages and return targets stay at full precision.
class RolloutBuffer {
 public:
  RolloutBuffer(std::size_t n_steps, std::size_t obs_dim, std::size_t act_dim,
                const std::optional<QuantScheme>& scheme = std::nullopt);
  /// Test seam: caller-provided observation store.
  RolloutBuffer(std::size_t n_steps, std::size_t obs_dim, std::size_t act_dim, ObsStore store);

  /// Appends one step. Throws std::logic_error when the buffer is full.
  void add(std::span<const double> obs, std::span<const double> action, double reward,
           double value, double log_prob, bool episode_start);

  /// Computes advantages and return targets once the buffer is full.
  /// `last_value` bootstraps past the final step (pass 0 if that step ended
  /// its episode). Throws std::logic_error before the buffer is full.
  void finalize(double last_value, double gamma, double lambda);

  void reset();

  bool full() const { return size_ == n_steps_; }
  bool finalized() const { return finalized_; }
  std::size_t size() const { return size_; }
  std::size_t n_steps() const { return n_steps_; }
  std::size_t obs_dim() const { return obs_dim_; }
  std::size_t act_dim() const { return act_dim_; }
  bool quantized() const { return store_.is_packed(); }

  /// Dequantized observation of step i, written into `out`.
  void obs(std::size_t i, std::span<double> out) const;
  std::span<const double> actions() const { return actions_; }
  std::span<const double> rewards() const { return rewards_; }
  std::span<const double> values() const { return values_; }
  std::span<const double> log_probs() const { return log_probs_; }
  std::span<const std::uint8_t> episode_starts() const { return episode_starts_; }
  /// Throw std::logic_error until finalize() has run.
  std::span<const double> advantages() const;
  std::span<const double> returns() const;

 private:
  std::size_t n_steps_, obs_dim_, act_dim_;
  std::size_t size_ = 0;
  bool finalized_ = false;
  ObsStore store_;
  std::vector<double> actions_;
  std::vector<double> rewards_;
  std::vector<double> values_;
  std::vector<double> log_probs_;
  std::vector<std::uint8_t> episode_starts_;
  std::vector<double> advantages_;
  std::vector<double> returns_;
};

}  // namespace qrl
