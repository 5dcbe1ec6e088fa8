#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qrl/rng.hpp"

namespace qrl {

struct EnvSpec {
  std::string name;
  std::size_t obs_dim = 0;
  std::size_t act_dim = 0;
  double action_low = -1.0;
  double action_high = 1.0;
  std::size_t max_episode_steps = 0;
};

struct StepResult {
  std::vector<double> obs;
  double reward = 0;
  bool terminated = false;
  bool truncated = false;
};

/// Deterministic continuous-control environment. Every emitted observation
/// component is finite and within [-127, 127] by construction. Instances
/// are single-threaded; independent instances may run in parallel.
class Env {
 public:
  virtual ~Env() = default;
  virtual const EnvSpec& spec() const = 0;
  /// With a seed: reseeds the internal generator first (same seed, same
  /// initial state). Without: continues the current stream.
  virtual std::vector<double> reset(std::optional<std::uint64_t> seed = std::nullopt) = 0;
  /// Actions outside the bounds are clipped. Throws std::invalid_argument
  /// on a non-finite action or dimension mismatch.
  virtual StepResult step(std::span<const double> action) = 0;
};

std::unique_ptr<Env> make_env(std::string_view name, std::uint64_t seed);
std::vector<std::string> env_names();

/// Torque-limited pendulum swing-up: state (theta, theta_dot), observation
/// (cos theta, sin theta, theta_dot), torque in [-2, 2], reward
/// -(wrap(theta)^2 + 0.1*theta_dot^2 + 0.001*u^2), semi-implicit Euler at
/// dt = 0.05, 200-step episodes, no early termination.
class PendulumEnv : public Env {
 public:
  explicit PendulumEnv(std::uint64_t seed, double max_speed = 8.0);
  const EnvSpec& spec() const override { return spec_; }
  std::vector<double> reset(std::optional<std::uint64_t> seed = std::nullopt) override;
  StepResult step(std::span<const double> action) override;

  /// State access for dynamics tests.
  void set_state(double theta, double theta_dot);
  double theta() const { return theta_; }
  double theta_dot() const { return theta_dot_; }

 private:
  std::vector<double> observation() const;

  EnvSpec spec_;
  Rng rng_;
  double max_speed_;
  double theta_ = 0, theta_dot_ = 0;
  std::size_t steps_ = 0;
};

/// 2-D point mass pushed toward a random goal: observation
/// (px, py, vx, vy, gx, gy), force in [-1, 1]^2, reward = -distance to
/// goal, 150-step episodes, no early termination.
class ReacherEnv : public Env {
 public:
  explicit ReacherEnv(std::uint64_t seed);
  const EnvSpec& spec() const override { return spec_; }
  std::vector<double> reset(std::optional<std::uint64_t> seed = std::nullopt) override;
  StepResult step(std::span<const double> action) override;

 private:
  std::vector<double> observation() const;

  EnvSpec spec_;
  Rng rng_;
  double px_ = 0, py_ = 0, vx_ = 0, vy_ = 0, gx_ = 0, gy_ = 0;
  std::size_t steps_ = 0;
};

}  // namespace qrl
