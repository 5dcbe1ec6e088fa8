#include "qrl/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "qrl/env.hpp"
#include "qrl/replay_buffer.hpp"
#include "qrl/rng.hpp"
#include "qrl/rollout_buffer.hpp"

namespace qrl {

namespace {

using Clock = std::chrono::steady_clock;

double ms_between(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double, std::milli>(b - a).count();
}

// trailing-window episode statistics and wall-clock bookkeeping
class RecordKeeper {
 public:
  RecordKeeper(TrainResult& result, std::size_t window)
      : result_(result), window_(window), last_time_(Clock::now()) {}

  void episode_done(std::uint64_t step, double episode_return, double loss_policy,
                    double loss_value_or_q, double alpha) {
    result_.episode_returns.push_back(episode_return);
    const std::size_t n = result_.episode_returns.size();
    const std::size_t w = std::min(window_, n);
    double mean = 0.0;
    for (std::size_t i = n - w; i < n; ++i) mean += result_.episode_returns[i];
    mean /= static_cast<double>(w);
    double var = 0.0;
    for (std::size_t i = n - w; i < n; ++i) {
      const double d = result_.episode_returns[i] - mean;
      var += d * d;
    }
    const auto now = Clock::now();
    const double ms = step > last_step_ ? ms_between(last_time_, now) /
                                              static_cast<double>(step - last_step_)
                                        : 0.0;
    last_time_ = now;
    last_step_ = step;
    result_.records.push_back(TrainRecord{step, mean, std::sqrt(var / static_cast<double>(w)),
                                          ms, loss_policy, loss_value_or_q, alpha});
  }

 private:
  TrainResult& result_;
  std::size_t window_;
  Clock::time_point last_time_;
  std::uint64_t last_step_ = 0;
};

TrainResult train_ppo(const TrainOptions& opt) {
  TrainResult result;
  auto env = make_env(opt.env_name, Rng::derive(opt.seed, 1));
  const EnvSpec& spec = env->spec();

  Rng rng_init(Rng::derive(opt.seed, 2));
  Rng rng_act(Rng::derive(opt.seed, 3));
  Rng rng_update(Rng::derive(opt.seed, 4));
  PpoAgent agent(spec.obs_dim, spec.act_dim, opt.ppo, rng_init);
  RolloutBuffer rollout(opt.ppo.n_steps, spec.obs_dim, spec.act_dim, opt.scheme);

  RecordKeeper keeper(result, opt.episode_window);
  const auto t0 = Clock::now();

  std::vector<double> obs = env->reset(Rng::derive(opt.seed, 5));
  std::vector<double> action(spec.act_dim), clipped(spec.act_dim);
  bool episode_start = true;
  double ep_return = 0.0;
  PpoLosses losses{};
  std::uint64_t steps = 0;

  while (steps < opt.total_steps) {
    rollout.reset();
    for (std::size_t t = 0; t < opt.ppo.n_steps; ++t) {
      double value = 0.0, log_prob = 0.0;
      agent.act(obs, rng_act, action, value, log_prob);
      for (std::size_t j = 0; j < spec.act_dim; ++j)
        clipped[j] = std::clamp(action[j], spec.action_low, spec.action_high);
      StepResult sr = env->step(clipped);
      ep_return += sr.reward;
      ++steps;

      const bool done = sr.terminated || sr.truncated;
      double buffer_reward = sr.reward;
      // bootstrap through time-limit truncation: the episode did not end in
      // a terminal state, so keep the value of the cut-off continuation
      if (sr.truncated && !sr.terminated) buffer_reward += opt.ppo.gamma * agent.value_of(sr.obs);
      rollout.add(obs, action, buffer_reward, value, log_prob, episode_start);

      episode_start = done;
      if (done) {
        keeper.episode_done(steps, ep_return, losses.policy, losses.value, 0.0);
        ep_return = 0.0;
        obs = env->reset();
      } else {
        obs = std::move(sr.obs);
      }
    }
    const double last_value = episode_start ? 0.0 : agent.value_of(obs);
    rollout.finalize(last_value, opt.ppo.gamma, opt.ppo.gae_lambda);
    losses = agent.update(rollout, rng_update);
  }
  result.mean_ms_per_step =
      steps > 0 ? ms_between(t0, Clock::now()) / static_cast<double>(steps) : 0.0;
  return result;
}

TrainResult train_sac(const TrainOptions& opt) {
  TrainResult result;
  auto env = make_env(opt.env_name, Rng::derive(opt.seed, 1));
  const EnvSpec& spec = env->spec();

  Rng rng_init(Rng::derive(opt.seed, 2));
  Rng rng_act(Rng::derive(opt.seed, 3));
  Rng rng_update(Rng::derive(opt.seed, 4));
  SacAgent agent(spec.obs_dim, spec.act_dim, opt.sac, rng_init);
  ReplayBuffer buffer(opt.sac.buffer_capacity, spec.obs_dim, spec.act_dim, opt.scheme);

  RecordKeeper keeper(result, opt.episode_window);
  const auto t0 = Clock::now();

  std::vector<double> obs = env->reset(Rng::derive(opt.seed, 5));
  std::vector<double> action(spec.act_dim), env_action(spec.act_dim);
  TransitionBatch batch;
  double ep_return = 0.0;
  SacLosses losses{};
  losses.alpha = agent.alpha();

  for (std::uint64_t step = 1; step <= opt.total_steps; ++step) {
    if (step <= opt.sac.learning_starts) {
      for (std::size_t j = 0; j < spec.act_dim; ++j) action[j] = rng_act.uniform(-1.0, 1.0);
    } else {
      agent.act(obs, rng_act, action);
    }
    // policy actions live in [-1, 1]; scale to the environment bounds
    for (std::size_t j = 0; j < spec.act_dim; ++j)
      env_action[j] = spec.action_low +
                      (action[j] + 1.0) * 0.5 * (spec.action_high - spec.action_low);
    StepResult sr = env->step(env_action);
    ep_return += sr.reward;

    const bool done = sr.terminated || sr.truncated;
    // bootstrap through truncation: only true terminal states cut the target
    buffer.push(obs, action, sr.reward, sr.obs, sr.terminated);

    if (done) {
      keeper.episode_done(step, ep_return, losses.policy, losses.q, losses.alpha);
      ep_return = 0.0;
      obs = env->reset();
    } else {
      obs = std::move(sr.obs);
    }

    if (step > opt.sac.learning_starts && step % opt.sac.train_freq == 0) {
      for (std::size_t g = 0; g < opt.sac.gradient_steps; ++g) {
        buffer.sample(opt.sac.batch_size, rng_update, batch);
        losses = agent.update(batch, rng_update);
      }
    }
  }
  result.mean_ms_per_step = opt.total_steps > 0
                                ? ms_between(t0, Clock::now()) / static_cast<double>(opt.total_steps)
                                : 0.0;
  return result;
}

}  // namespace

double TrainResult::final_return_mean(std::size_t window) const {
  if (episode_returns.empty()) return 0.0;
  const std::size_t w = std::min(window, episode_returns.size());
  double m = 0.0;
  for (std::size_t i = episode_returns.size() - w; i < episode_returns.size(); ++i)
    m += episode_returns[i];
  return m / static_cast<double>(w);
}

double TrainResult::initial_return_mean(std::size_t window) const {
  if (episode_returns.empty()) return 0.0;
  const std::size_t w = std::min(window, episode_returns.size());
  double m = 0.0;
  for (std::size_t i = 0; i < w; ++i) m += episode_returns[i];
  return m / static_cast<double>(w);
}

TrainResult train(const TrainOptions& opt) {
  if (opt.scheme) {
    // the clamp bound must cover every observation the environments emit
    if (opt.scheme->bound <= 0) throw std::invalid_argument("train: bad quantization scheme");
  }
  return opt.algo == AlgoKind::ppo ? train_ppo(opt) : train_sac(opt);
}

void write_curve_csv(const std::filesystem::path& path,
                     const std::vector<TrainRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_curve_csv: cannot open " + path.string());
  out << kCurveCsvHeader << '\n';
  char line[512];
  for (const TrainRecord& r : records) {
    std::snprintf(line, sizeof(line), "%llu,%.17g,%.17g,%.6g,%.17g,%.17g,%.17g",
                  static_cast<unsigned long long>(r.step), r.return_mean, r.return_std,
                  r.ms_per_step, r.loss_policy, r.loss_value_or_q, r.alpha);
    out << line << '\n';
  }
}

}  // namespace qrl
