#include "qrl/sac.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qrl {

namespace {
constexpr double kLogSqrt2Pi = 0.9189385332046727;
const double kOneBelow = std::nextafter(1.0, 0.0);
}  // namespace

void SacConfig::validate() const {
  if (lr <= 0) throw std::invalid_argument("SacConfig: lr must be positive");
  if (tau <= 0 || tau > 1) throw std::invalid_argument("SacConfig: tau must be in (0, 1]");
  if (gamma <= 0 || gamma > 1) throw std::invalid_argument("SacConfig: gamma must be in (0, 1]");
  if (batch_size == 0 || buffer_capacity == 0)
    throw std::invalid_argument("SacConfig: batch_size and buffer_capacity must be positive");
  if (batch_size > buffer_capacity)
    throw std::invalid_argument("SacConfig: batch_size cannot exceed buffer_capacity");
  if (train_freq == 0 || gradient_steps == 0)
    throw std::invalid_argument("SacConfig: train_freq and gradient_steps must be positive");
  if (init_alpha <= 0) throw std::invalid_argument("SacConfig: init_alpha must be positive");
}

SacAgent::SacAgent(std::size_t obs_dim, std::size_t act_dim, SacConfig cfg, Rng& init_rng)
    : obs_dim_(obs_dim), act_dim_(act_dim), cfg_(std::move(cfg)),
      adam_actor_(0), adam_critic_(0), adam_alpha_(0) {
  cfg_.validate();
  target_entropy_ = cfg_.target_entropy.value_or(-static_cast<double>(act_dim));

  std::vector<std::size_t> pi_sizes{obs_dim};
  pi_sizes.insert(pi_sizes.end(), cfg_.hidden.begin(), cfg_.hidden.end());
  pi_sizes.push_back(2 * act_dim);  // mean and raw log-std per action dim
  std::vector<std::size_t> q_sizes{obs_dim + act_dim};
  q_sizes.insert(q_sizes.end(), cfg_.hidden.begin(), cfg_.hidden.end());
  q_sizes.push_back(1);

  policy_ = Mlp(pi_sizes, Activation::relu);
  policy_.init_fanin_uniform(init_rng);
  q1_ = Mlp(q_sizes, Activation::relu);
  q1_.init_fanin_uniform(init_rng);
  q2_ = Mlp(q_sizes, Activation::relu);
  q2_.init_fanin_uniform(init_rng);
  q1_target_ = q1_;
  q2_target_ = q2_;

  log_alpha_ = std::log(cfg_.init_alpha);
  adam_actor_ = Adam(policy_.param_count(), AdamConfig{cfg_.lr});
  adam_critic_ = Adam(q1_.param_count() + q2_.param_count(), AdamConfig{cfg_.lr});
  adam_alpha_ = Adam(1, AdamConfig{cfg_.lr});

  grad_q1_.assign(q1_.param_count(), 0.0);
  grad_q2_.assign(q2_.param_count(), 0.0);
  grad_pi_.assign(policy_.param_count(), 0.0);
  scratch_params_.assign(q1_.param_count(), 0.0);
}

double SacAgent::alpha() const { return std::exp(log_alpha_); }

double SacAgent::q_target(double reward, bool done, double min_next_q, double next_log_prob,
                          double alpha, double gamma) {
  return reward + gamma * (done ? 0.0 : 1.0) * (min_next_q - alpha * next_log_prob);
}

void SacAgent::act(std::span<const double> obs, Rng& rng, std::span<double> action_out) {
  if (action_out.size() != act_dim_)
    throw std::invalid_argument("SacAgent::act: action size mismatch");
  const auto out = policy_.forward(obs, 1, act_cache_);
  const auto s = sample_squashed(out.subspan(0, act_dim_), out.subspan(act_dim_, act_dim_), rng,
                                 cfg_.head);
  std::copy(s.action.begin(), s.action.end(), action_out.begin());
}

void SacAgent::actor_pass(std::span<const double> obs, std::size_t batch,
                          std::span<const double> noise, MlpCache& cache, ActorPass& out) const {
  const auto head = policy_.forward(obs, batch, cache);
  out.actions.resize(batch * act_dim_);
  out.pre_tanh.resize(batch * act_dim_);
  out.stds.resize(batch * act_dim_);
  out.clamp_active.resize(batch * act_dim_);
  out.log_probs.assign(batch, 0.0);
  for (std::size_t i = 0; i < batch; ++i) {
    const double* h = head.data() + i * 2 * act_dim_;
    double logp = 0.0;
    for (std::size_t j = 0; j < act_dim_; ++j) {
      const std::size_t k = i * act_dim_ + j;
      const double lraw = h[act_dim_ + j];
      const bool saturated = lraw < cfg_.head.log_std_min || lraw > cfg_.head.log_std_max;
      const double ls = std::clamp(lraw, cfg_.head.log_std_min, cfg_.head.log_std_max);
      const double std = std::exp(ls);
      const double u = h[j] + std * noise[k];
      double a = std::tanh(u);
      a = std::clamp(a, -kOneBelow, kOneBelow);
      out.actions[k] = a;
      out.pre_tanh[k] = u;
      out.stds[k] = std;
      out.clamp_active[k] = saturated ? 1 : 0;
      logp += -0.5 * noise[k] * noise[k] - ls - kLogSqrt2Pi;
      logp -= std::log(1.0 - a * a + cfg_.head.eps);
    }
    out.log_probs[i] = logp;
  }
}

double SacAgent::critic_loss_eval(const TransitionBatch& batch,
                                  std::span<const double> next_noise, double alpha) {
  const std::size_t b = batch.size;
  actor_pass(batch.next_obs, b, next_noise, pi_next_cache_, next_pass_);

  qin_.resize(b * (obs_dim_ + act_dim_));
  for (std::size_t i = 0; i < b; ++i) {
    double* row = qin_.data() + i * (obs_dim_ + act_dim_);
    std::copy(batch.next_obs.begin() + i * obs_dim_, batch.next_obs.begin() + (i + 1) * obs_dim_,
              row);
    std::copy(next_pass_.actions.begin() + i * act_dim_,
              next_pass_.actions.begin() + (i + 1) * act_dim_, row + obs_dim_);
  }
  const auto t1 = q1_target_.forward(qin_, b, t1_cache_);
  const auto t2 = q2_target_.forward(qin_, b, t2_cache_);

  targets_.resize(b);
  for (std::size_t i = 0; i < b; ++i)
    targets_[i] = q_target(batch.reward[i], batch.done[i] != 0, std::min(t1[i], t2[i]),
                           next_pass_.log_probs[i], alpha, cfg_.gamma);

  for (std::size_t i = 0; i < b; ++i) {
    double* row = qin_.data() + i * (obs_dim_ + act_dim_);
    std::copy(batch.obs.begin() + i * obs_dim_, batch.obs.begin() + (i + 1) * obs_dim_, row);
    std::copy(batch.action.begin() + i * act_dim_, batch.action.begin() + (i + 1) * act_dim_,
              row + obs_dim_);
  }
  const auto q1 = q1_.forward(qin_, b, q1_cache_);
  const auto q2 = q2_.forward(qin_, b, q2_cache_);

  double mse1 = 0.0, mse2 = 0.0;
  const double inv_b = 1.0 / static_cast<double>(b);
  for (std::size_t i = 0; i < b; ++i) {
    const double e1 = q1[i] - targets_[i];
    const double e2 = q2[i] - targets_[i];
    mse1 += inv_b * e1 * e1;
    mse2 += inv_b * e2 * e2;
  }
  return 0.5 * (mse1 + mse2);
}

double SacAgent::actor_loss_eval(const TransitionBatch& batch, std::span<const double> cur_noise,
                                 double alpha) {
  const std::size_t b = batch.size;
  actor_pass(batch.obs, b, cur_noise, pi_cache_, cur_pass_);

  qin_pi_.resize(b * (obs_dim_ + act_dim_));
  for (std::size_t i = 0; i < b; ++i) {
    double* row = qin_pi_.data() + i * (obs_dim_ + act_dim_);
    std::copy(batch.obs.begin() + i * obs_dim_, batch.obs.begin() + (i + 1) * obs_dim_, row);
    std::copy(cur_pass_.actions.begin() + i * act_dim_,
              cur_pass_.actions.begin() + (i + 1) * act_dim_, row + obs_dim_);
  }
  const auto q1 = q1_.forward(qin_pi_, b, q1pi_cache_);
  const auto q2 = q2_.forward(qin_pi_, b, q2pi_cache_);

  double loss = 0.0;
  const double inv_b = 1.0 / static_cast<double>(b);
  for (std::size_t i = 0; i < b; ++i)
    loss += inv_b * (alpha * cur_pass_.log_probs[i] - std::min(q1[i], q2[i]));
  return loss;
}

double SacAgent::critic_loss_and_grads(const TransitionBatch& batch,
                                       std::span<const double> next_noise, double alpha,
                                       std::span<double> g_q1, std::span<double> g_q2) {
  const std::size_t b = batch.size;
  const double inv_b = 1.0 / static_cast<double>(b);
  const double loss = critic_loss_eval(batch, next_noise, alpha);
  const auto q1 = q1_cache_.acts.back();
  const auto q2 = q2_cache_.acts.back();
  dq_out_.resize(b);
  for (std::size_t i = 0; i < b; ++i) dq_out_[i] = inv_b * (q1[i] - targets_[i]);
  q1_.backward(q1_cache_, dq_out_, g_q1);
  for (std::size_t i = 0; i < b; ++i) dq_out_[i] = inv_b * (q2[i] - targets_[i]);
  q2_.backward(q2_cache_, dq_out_, g_q2);
  return loss;
}

double SacAgent::actor_loss_and_grads(const TransitionBatch& batch,
                                      std::span<const double> cur_noise, double alpha,
                                      std::span<double> g_policy) {
  const std::size_t b = batch.size;
  const double inv_b = 1.0 / static_cast<double>(b);
  const double loss = actor_loss_eval(batch, cur_noise, alpha);

  const auto q1 = q1pi_cache_.acts.back();
  const auto q2 = q2pi_cache_.acts.back();
  const std::size_t qin_dim = obs_dim_ + act_dim_;
  dq_out_.resize(b);
  dq_in_.assign(b * qin_dim, 0.0);
  dq_in2_.assign(b * qin_dim, 0.0);
  // route the min() gradient to the smaller critic per sample; the critic
  // parameters receive nothing here (scratch buffer)
  std::fill(scratch_params_.begin(), scratch_params_.end(), 0.0);
  for (std::size_t i = 0; i < b; ++i) dq_out_[i] = (q1[i] <= q2[i]) ? -inv_b : 0.0;
  q1_.backward(q1pi_cache_, dq_out_, scratch_params_, dq_in_);
  std::fill(scratch_params_.begin(), scratch_params_.end(), 0.0);
  for (std::size_t i = 0; i < b; ++i) dq_out_[i] = (q1[i] <= q2[i]) ? 0.0 : -inv_b;
  q2_.backward(q2pi_cache_, dq_out_, scratch_params_, dq_in2_);
  for (std::size_t i = 0; i < dq_in_.size(); ++i) dq_in_[i] += dq_in2_[i];

  // chain into the policy head: a = tanh(mean + std*eps), std = exp(ls)
  dpi_out_.assign(b * 2 * act_dim_, 0.0);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = 0; j < act_dim_; ++j) {
      const std::size_t k = i * act_dim_ + j;
      const double a = cur_pass_.actions[k];
      const double one_m_a2 = 1.0 - a * a;
      const double w = one_m_a2 + cfg_.head.eps;
      // d loss / d a: through the min-Q input plus the tanh log-det term
      const double da = dq_in_[i * qin_dim + obs_dim_ + j] + (alpha * inv_b) * (2.0 * a / w);
      const double du = da * one_m_a2;
      const double sigma_eps = cur_pass_.stds[k] * cur_noise[k];
      dpi_out_[i * 2 * act_dim_ + j] = du;
      double dls = du * sigma_eps - alpha * inv_b;
      if (cur_pass_.clamp_active[k]) dls = 0.0;
      dpi_out_[i * 2 * act_dim_ + act_dim_ + j] = dls;
    }
  }
  policy_.backward(pi_cache_, dpi_out_, g_policy);
  return loss;
}

SacLosses SacAgent::update(const TransitionBatch& batch, Rng& rng) {
  if (batch.obs_dim != obs_dim_ || batch.act_dim != act_dim_)
    throw std::invalid_argument("SacAgent::update: batch dimension mismatch");
  const std::size_t b = batch.size;
  if (b == 0) throw std::invalid_argument("SacAgent::update: empty batch");
  const double inv_b = 1.0 / static_cast<double>(b);

  cur_noise_.resize(b * act_dim_);
  next_noise_.resize(b * act_dim_);
  rng.fill_normal(cur_noise_);
  rng.fill_normal(next_noise_);

  const double alpha_now = alpha();
  SacLosses losses;
  losses.alpha = alpha_now;

  // --- temperature: minimize -log_alpha * mean(logp + target_entropy) ---
  actor_pass(batch.obs, b, cur_noise_, pi_cache_, cur_pass_);
  double ent_err = 0.0;
  for (std::size_t i = 0; i < b; ++i)
    ent_err += inv_b * (cur_pass_.log_probs[i] + target_entropy_);
  losses.alpha_loss = -log_alpha_ * ent_err;
  {
    double p[1] = {log_alpha_};
    const double gr[1] = {-ent_err};
    adam_alpha_.step(std::span<double>(p, 1), std::span<const double>(gr, 1));
    log_alpha_ = p[0];
  }

  // --- critics (with the pre-update alpha) ---
  std::fill(grad_q1_.begin(), grad_q1_.end(), 0.0);
  std::fill(grad_q2_.begin(), grad_q2_.end(), 0.0);
  losses.q = critic_loss_and_grads(batch, next_noise_, alpha_now, grad_q1_, grad_q2_);
  if (!std::isfinite(losses.q))
    throw std::runtime_error("SacAgent::update: non-finite critic loss (training diverged)");
  adam_critic_.step({q1_.params(), q2_.params()},
                    {std::span<const double>(grad_q1_), std::span<const double>(grad_q2_)});

  // --- actor (against the updated critics) ---
  std::fill(grad_pi_.begin(), grad_pi_.end(), 0.0);
  losses.policy = actor_loss_and_grads(batch, cur_noise_, alpha_now, grad_pi_);
  if (!std::isfinite(losses.policy))
    throw std::runtime_error("SacAgent::update: non-finite actor loss (training diverged)");
  adam_actor_.step(policy_.params(), grad_pi_);

  polyak_update(cfg_.tau);
  return losses;
}

void SacAgent::polyak_update(double tau) {
  auto blend = [tau](std::span<double> target, std::span<const double> online) {
    for (std::size_t i = 0; i < target.size(); ++i)
      target[i] = (1.0 - tau) * target[i] + tau * online[i];
  };
  blend(q1_target_.params(), q1_.params());
  blend(q2_target_.params(), q2_.params());
}

}  // namespace qrl
