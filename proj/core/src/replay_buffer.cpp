#include "qrl/replay_buffer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qrl {

void TransitionBatch::resize(std::size_t n, std::size_t obs_d, std::size_t act_d) {
  size = n;
  obs_dim = obs_d;
  act_dim = act_d;
  obs.resize(n * obs_d);
  action.resize(n * act_d);
  reward.resize(n);
  next_obs.resize(n * obs_d);
  done.resize(n);
}

namespace {
ObsStore make_store(std::size_t capacity, std::size_t obs_dim,
                    const std::optional<QuantScheme>& scheme) {
  return scheme ? ObsStore::packed(*scheme, obs_dim, capacity)
                : ObsStore::dense(obs_dim, capacity);
}
}  // namespace

ReplayBuffer::ReplayBuffer(std::size_t capacity, std::size_t obs_dim, std::size_t act_dim,
                           const std::optional<QuantScheme>& scheme)
    : ReplayBuffer(capacity, obs_dim, act_dim, make_store(capacity, obs_dim, scheme),
                   make_store(capacity, obs_dim, scheme)) {}

ReplayBuffer::ReplayBuffer(std::size_t capacity, std::size_t obs_dim, std::size_t act_dim,
                           ObsStore obs_store, ObsStore next_obs_store)
    : capacity_(capacity),
      obs_dim_(obs_dim),
      act_dim_(act_dim),
      obs_store_(std::move(obs_store)),
      next_obs_store_(std::move(next_obs_store)),
      actions_(capacity * act_dim, 0.0),
      rewards_(capacity, 0.0),
      dones_(capacity, 0) {
  if (capacity == 0 || obs_dim == 0 || act_dim == 0)
    throw std::invalid_argument("ReplayBuffer: capacity and dimensions must be positive");
  if (obs_store_.capacity() != capacity || obs_store_.obs_dim() != obs_dim ||
      next_obs_store_.capacity() != capacity || next_obs_store_.obs_dim() != obs_dim)
    throw std::invalid_argument("ReplayBuffer: store geometry mismatch");
}

void ReplayBuffer::push(const Transition& t) {
  push(t.obs, t.action, t.reward, t.next_obs, t.done);
}

void ReplayBuffer::push(std::span<const double> obs, std::span<const double> action,
                        double reward, std::span<const double> next_obs, bool done) {
  if (obs.size() != obs_dim_ || next_obs.size() != obs_dim_)
    throw std::invalid_argument("ReplayBuffer::push: observation dimension mismatch");
  if (action.size() != act_dim_)
    throw std::invalid_argument("ReplayBuffer::push: action dimension mismatch");
  obs_store_.write(cursor_, obs);
  next_obs_store_.write(cursor_, next_obs);
  std::copy(action.begin(), action.end(), actions_.begin() + cursor_ * act_dim_);
  rewards_[cursor_] = reward;
  dones_[cursor_] = done ? 1 : 0;
  cursor_ = (cursor_ + 1) % capacity_;
  if (size_ < capacity_) ++size_;
}

void ReplayBuffer::sample(std::size_t batch, Rng& rng, TransitionBatch& out) const {
  if (size_ == 0) throw std::logic_error("ReplayBuffer::sample: buffer is empty");
  if (batch == 0) throw std::invalid_argument("ReplayBuffer::sample: batch must be positive");
  out.resize(batch, obs_dim_, act_dim_);
  for (std::size_t b = 0; b < batch; ++b) {
    const std::size_t i = static_cast<std::size_t>(rng.uniform_int(size_));
    obs_store_.read(i, std::span<double>(out.obs.data() + b * obs_dim_, obs_dim_));
    next_obs_store_.read(i, std::span<double>(out.next_obs.data() + b * obs_dim_, obs_dim_));
    std::copy(actions_.begin() + i * act_dim_, actions_.begin() + (i + 1) * act_dim_,
              out.action.begin() + b * act_dim_);
    out.reward[b] = rewards_[i];
    out.done[b] = dones_[i];
  }
}

Transition ReplayBuffer::get(std::size_t i) const {
  if (i >= size_) throw std::out_of_range("ReplayBuffer::get: index out of range");
  Transition t;
  t.obs.resize(obs_dim_);
  t.next_obs.resize(obs_dim_);
  obs_store_.read(i, std::span<double>(t.obs));
  next_obs_store_.read(i, std::span<double>(t.next_obs));
  t.action.assign(actions_.begin() + i * act_dim_, actions_.begin() + (i + 1) * act_dim_);
  t.reward = rewards_[i];
  t.done = dones_[i] != 0;
  return t;
}

std::size_t ReplayBuffer::byte_size() const {
  return obs_store_.byte_size() + next_obs_store_.byte_size() +
         actions_.size() * sizeof(double) + rewards_.size() * sizeof(double) +
         dones_.size() * sizeof(std::uint8_t);
}

}  // namespace qrl
