#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qrl/adam.hpp"
#include "qrl/mlp.hpp"
#include "qrl/rng.hpp"
#include "qrl/rollout_buffer.hpp"

namespace qrl {

struct PpoConfig {
  std::size_t n_steps = 2048;
  std::size_t batch_size = 64;
  std::size_t epochs = 10;
  double lr = 3e-4;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double clip_range = 0.2;
  double vf_coef = 0.5;
  double ent_coef = 0.0;
  double max_grad_norm = 0.5;
  std::vector<std::size_t> hidden{64, 64};
  double adam_eps = 1e-5;

  void validate() const;  // throws std::invalid_argument
};

struct PpoLosses {
  double policy = 0;
  double value = 0;
  double entropy = 0;
};

/// One minibatch view over a finalized rollout. `advantages` are expected
/// to be already normalized when that is wanted; the loss uses them as is.
struct PpoMinibatch {
  std::size_t size = 0;
  std::size_t obs_dim = 0;
  std::size_t act_dim = 0;
  std::span<const double> obs;            // [size x obs_dim]
  std::span<const double> actions;        // [size x act_dim]
  std::span<const double> old_log_probs;  // [size]
  std::span<const double> advantages;     // [size]
  std::span<const double> returns;        // [size]
};

/// Clipped-surrogate actor-critic with a diagonal-Gaussian policy
/// (state-independent log-std), tanh networks, separate policy and value
/// nets, one Adam over all parameters and global gradient-norm clipping.
class PpoAgent {
 public:
  PpoAgent(std::size_t obs_dim, std::size_t act_dim, PpoConfig cfg, Rng& init_rng);

  /// Samples an action and returns the value estimate and log-probability
  /// used for the stored rollout step.
  void act(std::span<const double> obs, Rng& rng, std::span<double> action_out, double& value,
           double& log_prob);
  double value_of(std::span<const double> obs);

  /// Runs `epochs` passes of shuffled minibatch updates over a finalized
  /// rollout; advantages are normalized per minibatch. Returns mean losses.
  /// Throws std::runtime_error when a loss turns non-finite.
  PpoLosses update(const RolloutBuffer& rollout, Rng& shuffle_rng);

  /// Total loss (policy + ent_coef * entropy term + vf_coef * value) on one
  /// minibatch; when `grads` is non-empty (sized param_count()) the loss
  /// gradient is accumulated into it, laid out as [policy | log_std | value].
  PpoLosses loss(const PpoMinibatch& mb, std::span<double> grads = {});

  std::size_t param_count() const;
  std::vector<std::span<double>> param_spans();
  const Mlp& policy_net() const { return policy_; }
  const Mlp& value_net() const { return value_; }
  std::span<const double> log_std() const { return log_std_; }
  const PpoConfig& config() const { return cfg_; }
  std::size_t obs_dim() const { return obs_dim_; }
  std::size_t act_dim() const { return act_dim_; }

 private:
  std::size_t obs_dim_, act_dim_;
  PpoConfig cfg_;
  Mlp policy_;
  std::vector<double> log_std_;
  Mlp value_;
  Adam adam_;

  MlpCache policy_cache_, value_cache_, act_cache_;
  std::vector<double> grad_buf_;
  std::vector<double> mb_obs_, mb_adv_;
  std::vector<std::size_t> indices_;
};

}  // namespace qrl
