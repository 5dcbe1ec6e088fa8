#include "qrl/env.hpp"

#include <stdexcept>

namespace qrl {

std::unique_ptr<Env> make_env(std::string_view name, std::uint64_t seed) {
  if (name == "pendulum") return std::make_unique<PendulumEnv>(seed);
  if (name == "reacher") return std::make_unique<ReacherEnv>(seed);
  throw std::invalid_argument("make_env: unknown environment '" + std::string(name) +
                              "' (available: pendulum, reacher)");
}

std::vector<std::string> env_names() { return {"pendulum", "reacher"}; }

}  // namespace qrl
