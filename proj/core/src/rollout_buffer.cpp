#include "qrl/rollout_buffer.hpp"

#include <algorithm>
#include <stdexcept>

#include "qrl/gae.hpp"

namespace qrl {

RolloutBuffer::RolloutBuffer(std::size_t n_steps, std::size_t obs_dim, std::size_t act_dim,
                             const std::optional<QuantScheme>& scheme)
    : RolloutBuffer(n_steps, obs_dim, act_dim,
                    scheme ? ObsStore::packed(*scheme, obs_dim, n_steps)
                           : ObsStore::dense(obs_dim, n_steps)) {}

RolloutBuffer::RolloutBuffer(std::size_t n_steps, std::size_t obs_dim, std::size_t act_dim,
                             ObsStore store)
    : n_steps_(n_steps),
      obs_dim_(obs_dim),
      act_dim_(act_dim),
      store_(std::move(store)),
      actions_(n_steps * act_dim, 0.0),
      rewards_(n_steps, 0.0),
      values_(n_steps, 0.0),
      log_probs_(n_steps, 0.0),
      episode_starts_(n_steps, 0),
      advantages_(n_steps, 0.0),
      returns_(n_steps, 0.0) {
  if (n_steps == 0 || obs_dim == 0 || act_dim == 0)
    throw std::invalid_argument("RolloutBuffer: n_steps and dimensions must be positive");
  if (store_.capacity() != n_steps || store_.obs_dim() != obs_dim)
    throw std::invalid_argument("RolloutBuffer: store geometry mismatch");
}

void RolloutBuffer::add(std::span<const double> obs, std::span<const double> action,
                        double reward, double value, double log_prob, bool episode_start) {
  if (full()) throw std::logic_error("RolloutBuffer::add: buffer is full");
  if (obs.size() != obs_dim_)
    throw std::invalid_argument("RolloutBuffer::add: observation dimension mismatch");
  if (action.size() != act_dim_)
    throw std::invalid_argument("RolloutBuffer::add: action dimension mismatch");
  store_.write(size_, obs);
  std::copy(action.begin(), action.end(), actions_.begin() + size_ * act_dim_);
  rewards_[size_] = reward;
  values_[size_] = value;
  log_probs_[size_] = log_prob;
  episode_starts_[size_] = episode_start ? 1 : 0;
  ++size_;
}

void RolloutBuffer::finalize(double last_value, double gamma, double lambda) {
  if (!full()) throw std::logic_error("RolloutBuffer::finalize: buffer is not full");
  compute_gae(rewards_, values_, episode_starts_, last_value, gamma, lambda,
              std::span<double>(advantages_), std::span<double>(returns_));
  finalized_ = true;
}

void RolloutBuffer::reset() {
  size_ = 0;
  finalized_ = false;
}

void RolloutBuffer::obs(std::size_t i, std::span<double> out) const {
  if (i >= size_) throw std::out_of_range("RolloutBuffer::obs: index out of range");
  store_.read(i, out);
}

std::span<const double> RolloutBuffer::advantages() const {
  if (!finalized_) throw std::logic_error("RolloutBuffer::advantages: not finalized");
  return advantages_;
}

std::span<const double> RolloutBuffer::returns() const {
  if (!finalized_) throw std::logic_error("RolloutBuffer::returns: not finalized");
  return returns_;
}

}  // namespace qrl
