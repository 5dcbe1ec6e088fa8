#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qrl/env.hpp"

namespace qrl {

namespace {
constexpr double kDt = 0.1;
constexpr double kDrag = 0.25;
constexpr double kPosLimit = 5.0;
constexpr double kVelLimit = 5.0;
}  // namespace

ReacherEnv::ReacherEnv(std::uint64_t seed) : rng_(seed) {
  spec_ = EnvSpec{"reacher", 6, 2, -1.0, 1.0, 150};
}

std::vector<double> ReacherEnv::observation() const { return {px_, py_, vx_, vy_, gx_, gy_}; }

std::vector<double> ReacherEnv::reset(std::optional<std::uint64_t> seed) {
  if (seed) rng_ = Rng(*seed);
  px_ = rng_.uniform(-1.0, 1.0);
  py_ = rng_.uniform(-1.0, 1.0);
  vx_ = vy_ = 0.0;
  gx_ = rng_.uniform(-1.0, 1.0);
  gy_ = rng_.uniform(-1.0, 1.0);
  steps_ = 0;
  return observation();
}

StepResult ReacherEnv::step(std::span<const double> action) {
  if (action.size() != 2) throw std::invalid_argument("ReacherEnv::step: action must be 2-D");
  for (double a : action)
    if (!std::isfinite(a)) throw std::invalid_argument("ReacherEnv::step: non-finite action");
  const double fx = std::clamp(action[0], -1.0, 1.0);
  const double fy = std::clamp(action[1], -1.0, 1.0);

  // velocity first, then position with the new velocity
  vx_ = std::clamp(vx_ + kDt * (fx - kDrag * vx_), -kVelLimit, kVelLimit);
  vy_ = std::clamp(vy_ + kDt * (fy - kDrag * vy_), -kVelLimit, kVelLimit);
  px_ = std::clamp(px_ + kDt * vx_, -kPosLimit, kPosLimit);
  py_ = std::clamp(py_ + kDt * vy_, -kPosLimit, kPosLimit);
  ++steps_;

  StepResult r;
  r.obs = observation();
  r.reward = -std::hypot(px_ - gx_, py_ - gy_);
  r.terminated = false;
  r.truncated = steps_ >= spec_.max_episode_steps;
  return r;
}

}  // namespace qrl
