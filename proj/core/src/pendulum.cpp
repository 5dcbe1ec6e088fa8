#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qrl/env.hpp"

namespace qrl {

namespace {
constexpr double kDt = 0.05;
constexpr double kGravity = 10.0;
constexpr double kMass = 1.0;
constexpr double kLength = 1.0;
constexpr double kMaxTorque = 2.0;

// wraps an angle to [-pi, pi)
double wrap_angle(double theta) {
  const double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(theta + std::numbers::pi, two_pi);
  if (a < 0) a += two_pi;
  return a - std::numbers::pi;
}
}  // namespace

PendulumEnv::PendulumEnv(std::uint64_t seed, double max_speed)
    : rng_(seed), max_speed_(max_speed) {
  spec_ = EnvSpec{"pendulum", 3, 1, -kMaxTorque, kMaxTorque, 200};
}

std::vector<double> PendulumEnv::observation() const {
  return {std::cos(theta_), std::sin(theta_), theta_dot_};
}

std::vector<double> PendulumEnv::reset(std::optional<std::uint64_t> seed) {
  if (seed) rng_ = Rng(*seed);
  theta_ = rng_.uniform(-std::numbers::pi, std::numbers::pi);
  theta_dot_ = rng_.uniform(-1.0, 1.0);
  steps_ = 0;
  return observation();
}

void PendulumEnv::set_state(double theta, double theta_dot) {
  theta_ = theta;
  theta_dot_ = theta_dot;
  steps_ = 0;
}

StepResult PendulumEnv::step(std::span<const double> action) {
  if (action.size() != 1) throw std::invalid_argument("PendulumEnv::step: action must be 1-D");
  if (!std::isfinite(action[0]))
    throw std::invalid_argument("PendulumEnv::step: non-finite action");
  const double u = std::clamp(action[0], -kMaxTorque, kMaxTorque);

  const double wrapped = wrap_angle(theta_);
  const double cost = wrapped * wrapped + 0.1 * theta_dot_ * theta_dot_ + 0.001 * u * u;

  // semi-implicit Euler: velocity first, then position with the new velocity
  const double accel = 3.0 * kGravity / (2.0 * kLength) * std::sin(theta_) +
                       3.0 / (kMass * kLength * kLength) * u;
  theta_dot_ = std::clamp(theta_dot_ + accel * kDt, -max_speed_, max_speed_);
  theta_ += theta_dot_ * kDt;
  ++steps_;

  StepResult r;
  r.obs = observation();
  r.reward = -cost;
  r.terminated = false;
  r.truncated = steps_ >= spec_.max_episode_steps;
  return r;
}

}  // namespace qrl
