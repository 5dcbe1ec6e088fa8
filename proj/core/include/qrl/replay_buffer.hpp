#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qrl/obs_store.hpp"
#include "qrl/quant.hpp"
#include "qrl/rng.hpp"

namespace qrl {

/// One off-policy experience tuple.
struct Transition {
  std::vector<double> obs;
  std::vector<double> action;
  double reward = 0;
  std::vector<double> next_obs;
  bool done = false;
};

/// Structure-of-arrays minibatch, row-major [size x dim] per field.
/// Reused across sample() calls to avoid reallocation in the update loop.
struct TransitionBatch {
  std::size_t size = 0;
  std::size_t obs_dim = 0;
  std::size_t act_dim = 0;
  std::vector<double> obs;
  std::vector<double> action;
  std::vector<double> reward;
  std::vector<double> next_obs;
  std::vector<std::uint8_t> done;

  void resize(std::size_t n, std::size_t obs_d, std::size_t act_d);
};

/// FIFO ring buffer of transitions. Observations and next observations go
/// through an ObsStore (bit-packed when a quantization scheme is given);
/// actions, rewards and done flags stay at full precision. Samples always
/// return dequantized observation values, never raw codes.
///
/// Single writer; concurrent reads are safe only while no write is in
/// flight (not enforced).
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, std::size_t obs_dim, std::size_t act_dim,
               const std::optional<QuantScheme>& scheme = std::nullopt);
  /// Test seam: buffers with caller-provided observation stores.
  ReplayBuffer(std::size_t capacity, std::size_t obs_dim, std::size_t act_dim,
               ObsStore obs_store, ObsStore next_obs_store);

  void push(const Transition& t);
  void push(std::span<const double> obs, std::span<const double> action, double reward,
            std::span<const double> next_obs, bool done);

  /// Draws `batch` indices uniformly with replacement from [0, size).
  /// Deterministic for a fixed rng state. Throws std::logic_error when empty.
  void sample(std::size_t batch, Rng& rng, TransitionBatch& out) const;

  /// Stored transition at ring slot `i` (observations dequantized).
  Transition get(std::size_t i) const;

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t obs_dim() const { return obs_dim_; }
  std::size_t act_dim() const { return act_dim_; }
  bool quantized() const { return obs_store_.is_packed(); }

  /// Payload bytes actually held (observation stores + dense fields).
  std::size_t byte_size() const;

 private:
  std::size_t capacity_, obs_dim_, act_dim_;
  std::size_t size_ = 0;
  std::size_t cursor_ = 0;
  ObsStore obs_store_;
  ObsStore next_obs_store_;
  std::vector<double> actions_;
  std::vector<double> rewards_;
  std::vector<std::uint8_t> dones_;
};

}  // namespace qrl
