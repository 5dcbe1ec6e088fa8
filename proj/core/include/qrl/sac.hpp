#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qrl/adam.hpp"
#include "qrl/heads.hpp"
#include "qrl/mlp.hpp"
#include "qrl/replay_buffer.hpp"
#include "qrl/rng.hpp"

namespace qrl {

struct SacConfig {
  double lr = 3e-4;
  std::size_t buffer_capacity = 1'000'000;
  std::size_t batch_size = 256;
  double tau = 0.005;
  double gamma = 0.99;
  std::size_t train_freq = 1;       // environment steps between update rounds
  std::size_t gradient_steps = 1;   // gradient steps per update round
  std::size_t learning_starts = 100;
  double init_alpha = 1.0;
  std::optional<double> target_entropy;  // default: -act_dim
  std::vector<std::size_t> hidden{64, 64};
  SquashedGaussianConfig head{};

  void validate() const;  // throws std::invalid_argument
};

struct SacLosses {
  double q = 0;
  double policy = 0;
  double alpha_loss = 0;
  double alpha = 1.0;
};

/// Soft actor-critic: twin Q networks with Polyak-averaged targets, a
/// tanh-squashed Gaussian policy and automatic temperature tuning toward a
/// target entropy of -act_dim. Networks use rectifier hidden layers with
/// fan-in uniform initialization; each of actor, critic pair and temperature
/// has its own Adam.
class SacAgent {
 public:
  SacAgent(std::size_t obs_dim, std::size_t act_dim, SacConfig cfg, Rng& init_rng);

  /// Stochastic squashed action in (-1, 1)^act_dim.
  void act(std::span<const double> obs, Rng& rng, std::span<double> action_out);

  /// One gradient step on temperature, critics and actor plus a Polyak
  /// target update, in that order. Noise for the reparameterized actions is
  /// drawn from `rng` (current-state noise first, next-state noise second).
  SacLosses update(const TransitionBatch& batch, Rng& rng);

  /// Loss evaluations with fixed noise, shared with update(); used by the
  /// finite-difference gradient checks.
  double critic_loss_eval(const TransitionBatch& batch, std::span<const double> next_noise,
                          double alpha);
  double actor_loss_eval(const TransitionBatch& batch, std::span<const double> cur_noise,
                         double alpha);
  /// As above, also accumulating the loss gradients (the exact path update()
  /// takes). Gradient spans must match the corresponding param_count().
  double critic_loss_and_grads(const TransitionBatch& batch, std::span<const double> next_noise,
                               double alpha, std::span<double> g_q1, std::span<double> g_q2);
  double actor_loss_and_grads(const TransitionBatch& batch, std::span<const double> cur_noise,
                              double alpha, std::span<double> g_policy);

  /// r + gamma * (1 - done) * (min_next_q - alpha * next_log_prob)
  static double q_target(double reward, bool done, double min_next_q, double next_log_prob,
                         double alpha, double gamma);

  double alpha() const;
  double log_alpha() const { return log_alpha_; }
  double target_entropy() const { return target_entropy_; }
  const Mlp& policy_net() const { return policy_; }
  const Mlp& q1_net() const { return q1_; }
  const Mlp& q2_net() const { return q2_; }
  const Mlp& q1_target_net() const { return q1_target_; }
  const Mlp& q2_target_net() const { return q2_target_; }
  Mlp& mutable_q1() { return q1_; }
  Mlp& mutable_q2() { return q2_; }
  Mlp& mutable_policy() { return policy_; }
  const SacConfig& config() const { return cfg_; }
  std::size_t obs_dim() const { return obs_dim_; }
  std::size_t act_dim() const { return act_dim_; }

  void polyak_update(double tau);

 private:
  struct ActorPass {
    std::vector<double> actions;    // [B x act], squashed
    std::vector<double> pre_tanh;   // [B x act]
    std::vector<double> stds;       // [B x act], after log-std clamp
    std::vector<std::uint8_t> clamp_active;  // log-std clamp saturated
    std::vector<double> log_probs;  // [B]
  };
  /// Policy forward + reparameterized squash on a batch of observations.
  void actor_pass(std::span<const double> obs, std::size_t batch, std::span<const double> noise,
                  MlpCache& cache, ActorPass& out) const;

  std::size_t obs_dim_, act_dim_;
  SacConfig cfg_;
  double target_entropy_;
  Mlp policy_, q1_, q2_, q1_target_, q2_target_;
  double log_alpha_;
  Adam adam_actor_, adam_critic_, adam_alpha_;

  MlpCache pi_cache_, pi_next_cache_, q1_cache_, q2_cache_, q1pi_cache_, q2pi_cache_,
      t1_cache_, t2_cache_, act_cache_;
  ActorPass cur_pass_, next_pass_;
  std::vector<double> qin_, qin_pi_, grad_q1_, grad_q2_, grad_pi_, dq_out_, dq_in_, dq_in2_,
      dpi_out_, targets_, scratch_params_, cur_noise_, next_noise_;
};

}  // namespace qrl
