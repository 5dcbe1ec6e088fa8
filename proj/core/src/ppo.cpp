#include "qrl/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qrl/heads.hpp"

namespace qrl {

void PpoConfig::validate() const {
  if (n_steps == 0 || batch_size == 0 || epochs == 0)
    throw std::invalid_argument("PpoConfig: n_steps, batch_size and epochs must be positive");
  if (batch_size > n_steps)
    throw std::invalid_argument("PpoConfig: batch_size cannot exceed n_steps");
  if (lr <= 0 || gamma <= 0 || gamma > 1 || gae_lambda < 0 || gae_lambda > 1)
    throw std::invalid_argument("PpoConfig: bad lr/gamma/lambda");
  if (clip_range <= 0 || clip_range >= 1)
    throw std::invalid_argument("PpoConfig: clip_range must be in (0, 1)");
  if (vf_coef < 0 || ent_coef < 0 || max_grad_norm <= 0)
    throw std::invalid_argument("PpoConfig: bad loss coefficients");
}

PpoAgent::PpoAgent(std::size_t obs_dim, std::size_t act_dim, PpoConfig cfg, Rng& init_rng)
    : obs_dim_(obs_dim), act_dim_(act_dim), cfg_(std::move(cfg)), adam_(0) {
  cfg_.validate();
  std::vector<std::size_t> pi_sizes{obs_dim};
  pi_sizes.insert(pi_sizes.end(), cfg_.hidden.begin(), cfg_.hidden.end());
  pi_sizes.push_back(act_dim);
  std::vector<std::size_t> v_sizes{obs_dim};
  v_sizes.insert(v_sizes.end(), cfg_.hidden.begin(), cfg_.hidden.end());
  v_sizes.push_back(1);

  policy_ = Mlp(pi_sizes, Activation::tanh);
  policy_.init_orthogonal(init_rng, std::numbers::sqrt2, 0.01);
  log_std_.assign(act_dim, 0.0);
  value_ = Mlp(v_sizes, Activation::tanh);
  value_.init_orthogonal(init_rng, std::numbers::sqrt2, 1.0);

  adam_ = Adam(param_count(), AdamConfig{cfg_.lr, 0.9, 0.999, cfg_.adam_eps});
  grad_buf_.assign(param_count(), 0.0);
}

std::size_t PpoAgent::param_count() const {
  return policy_.param_count() + log_std_.size() + value_.param_count();
}

std::vector<std::span<double>> PpoAgent::param_spans() {
  return {policy_.params(), std::span<double>(log_std_), value_.params()};
}

void PpoAgent::act(std::span<const double> obs, Rng& rng, std::span<double> action_out,
                   double& value, double& log_prob) {
  if (action_out.size() != act_dim_)
    throw std::invalid_argument("PpoAgent::act: action size mismatch");
  const auto mean = policy_.forward(obs, 1, act_cache_);
  for (std::size_t j = 0; j < act_dim_; ++j)
    action_out[j] = mean[j] + std::exp(log_std_[j]) * rng.normal();
  log_prob = diag_gaussian_log_prob(mean, log_std_, action_out);
  value = value_of(obs);
}

double PpoAgent::value_of(std::span<const double> obs) {
  return value_.forward(obs, 1, act_cache_)[0];
}

PpoLosses PpoAgent::loss(const PpoMinibatch& mb, std::span<double> grads) {
  if (mb.obs_dim != obs_dim_ || mb.act_dim != act_dim_)
    throw std::invalid_argument("PpoAgent::loss: minibatch dimension mismatch");
  const std::size_t b = mb.size;
  const double inv_b = 1.0 / static_cast<double>(b);
  const bool with_grads = !grads.empty();
  if (with_grads && grads.size() != param_count())
    throw std::invalid_argument("PpoAgent::loss: gradient buffer size mismatch");

  const auto mean = policy_.forward(mb.obs, b, policy_cache_);
  const auto values = value_.forward(mb.obs, b, value_cache_);

  const double entropy = diag_gaussian_entropy(log_std_);
  std::vector<double> dmean;
  std::vector<double> dvalue;
  std::span<double> g_policy, g_log_std, g_value;
  if (with_grads) {
    dmean.assign(b * act_dim_, 0.0);
    dvalue.assign(b, 0.0);
    g_policy = grads.subspan(0, policy_.param_count());
    g_log_std = grads.subspan(policy_.param_count(), act_dim_);
    g_value = grads.subspan(policy_.param_count() + act_dim_, value_.param_count());
  }

  double policy_loss = 0.0, value_loss = 0.0;
  for (std::size_t i = 0; i < b; ++i) {
    const double* mu = mean.data() + i * act_dim_;
    const double* a = mb.actions.data() + i * act_dim_;
    double logp = 0.0;
    for (std::size_t j = 0; j < act_dim_; ++j) {
      const double std = std::exp(log_std_[j]);
      const double z = (a[j] - mu[j]) / std;
      logp += -0.5 * z * z - log_std_[j] - 0.9189385332046727;
    }
    const double adv = mb.advantages[i];
    const double ratio = std::exp(logp - mb.old_log_probs[i]);
    const double unclipped = ratio * adv;
    const double clipped =
        std::clamp(ratio, 1.0 - cfg_.clip_range, 1.0 + cfg_.clip_range) * adv;
    policy_loss -= inv_b * std::min(unclipped, clipped);

    const double verr = values[i] - mb.returns[i];
    value_loss += inv_b * verr * verr;

    if (with_grads) {
      // min() follows the unclipped branch when it is not larger; the
      // clipped branch has zero gradient (the clamp is saturated there)
      if (unclipped <= clipped) {
        const double dlogp = -inv_b * unclipped;
        for (std::size_t j = 0; j < act_dim_; ++j) {
          const double std = std::exp(log_std_[j]);
          const double z = (a[j] - mu[j]) / std;
          dmean[i * act_dim_ + j] = dlogp * (a[j] - mu[j]) / (std * std);
          g_log_std[j] += dlogp * (z * z - 1.0);
        }
      }
      dvalue[i] = cfg_.vf_coef * 2.0 * inv_b * verr;
    }
  }

  const double total = policy_loss + cfg_.ent_coef * (-entropy) + cfg_.vf_coef * value_loss;
  if (!std::isfinite(total))
    throw std::runtime_error("PpoAgent::loss: non-finite loss (training diverged)");

  if (with_grads) {
    for (std::size_t j = 0; j < act_dim_; ++j) g_log_std[j] += cfg_.ent_coef * (-1.0);
    policy_.backward(policy_cache_, dmean, g_policy);
    value_.backward(value_cache_, dvalue, g_value);
  }
  return PpoLosses{policy_loss, value_loss, entropy};
}

PpoLosses PpoAgent::update(const RolloutBuffer& rollout, Rng& shuffle_rng) {
  if (!rollout.finalized()) throw std::logic_error("PpoAgent::update: rollout not finalized");
  if (rollout.obs_dim() != obs_dim_ || rollout.act_dim() != act_dim_)
    throw std::invalid_argument("PpoAgent::update: rollout dimension mismatch");
  const std::size_t n = rollout.n_steps();

  indices_.resize(n);
  for (std::size_t i = 0; i < n; ++i) indices_[i] = i;

  const auto advantages = rollout.advantages();
  const auto returns = rollout.returns();
  const auto actions = rollout.actions();
  const auto old_log_probs = rollout.log_probs();

  PpoLosses sum{};
  std::size_t batches = 0;
  std::vector<double> mb_actions, mb_oldlp, mb_returns;
  for (std::size_t epoch = 0; epoch < cfg_.epochs; ++epoch) {
    shuffle_rng.shuffle(std::span<std::size_t>(indices_));
    for (std::size_t start = 0; start + cfg_.batch_size <= n; start += cfg_.batch_size) {
      const std::size_t b = cfg_.batch_size;
      mb_obs_.resize(b * obs_dim_);
      mb_adv_.resize(b);
      mb_actions.resize(b * act_dim_);
      mb_oldlp.resize(b);
      mb_returns.resize(b);
      for (std::size_t k = 0; k < b; ++k) {
        const std::size_t idx = indices_[start + k];
        rollout.obs(idx, std::span<double>(mb_obs_.data() + k * obs_dim_, obs_dim_));
        std::copy(actions.begin() + idx * act_dim_, actions.begin() + (idx + 1) * act_dim_,
                  mb_actions.begin() + k * act_dim_);
        mb_adv_[k] = advantages[idx];
        mb_oldlp[k] = old_log_probs[idx];
        mb_returns[k] = returns[idx];
      }
      // per-minibatch advantage normalization
      double m = 0.0;
      for (double a : mb_adv_) m += a;
      m /= static_cast<double>(b);
      double var = 0.0;
      for (double a : mb_adv_) var += (a - m) * (a - m);
      const double sd = std::sqrt(var / static_cast<double>(b));
      for (double& a : mb_adv_) a = (a - m) / (sd + 1e-8);

      PpoMinibatch mb{b,        obs_dim_, act_dim_,  mb_obs_,
                      mb_actions, mb_oldlp, mb_adv_, mb_returns};
      std::fill(grad_buf_.begin(), grad_buf_.end(), 0.0);
      const PpoLosses l = loss(mb, grad_buf_);
      sum.policy += l.policy;
      sum.value += l.value;
      sum.entropy += l.entropy;
      ++batches;

      auto params = param_spans();
      std::vector<std::span<double>> gspans;
      std::vector<std::span<const double>> gviews;
      std::size_t off = 0;
      for (const auto& p : params) {
        gspans.push_back(std::span<double>(grad_buf_.data() + off, p.size()));
        gviews.push_back(std::span<const double>(grad_buf_.data() + off, p.size()));
        off += p.size();
      }
      clip_grad_norm(gspans, cfg_.max_grad_norm);
      adam_.step(params, gviews);
    }
  }
  if (batches > 0) {
    sum.policy /= static_cast<double>(batches);
    sum.value /= static_cast<double>(batches);
    sum.entropy /= static_cast<double>(batches);
  }
  return sum;
}

}  // namespace qrl
