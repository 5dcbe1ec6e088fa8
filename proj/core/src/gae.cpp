#include "qrl/gae.hpp"

#include <stdexcept>

namespace qrl {

void compute_gae(std::span<const double> rewards, std::span<const double> values,
                 std::span<const std::uint8_t> episode_starts, double last_value, double gamma,
                 double lambda, std::span<double> advantages_out, std::span<double> returns_out) {
  const std::size_t n = rewards.size();
  if (values.size() != n || episode_starts.size() != n || advantages_out.size() != n ||
      returns_out.size() != n)
    throw std::invalid_argument("compute_gae: sequence length mismatch");

  double running = 0.0;
  for (std::size_t k = n; k-- > 0;) {
    double next_value, next_nonterminal;
    if (k == n - 1) {
      next_value = last_value;
      next_nonterminal = 1.0;
    } else {
      next_value = values[k + 1];
      next_nonterminal = episode_starts[k + 1] ? 0.0 : 1.0;
    }
    const double delta = rewards[k] + gamma * next_value * next_nonterminal - values[k];
    running = delta + gamma * lambda * next_nonterminal * running;
    advantages_out[k] = running;
    returns_out[k] = running + values[k];
  }
}

GaeResult compute_gae(std::span<const double> rewards, std::span<const double> values,
                      std::span<const std::uint8_t> episode_starts, double last_value,
                      double gamma, double lambda) {
  GaeResult r;
  r.advantages.resize(rewards.size());
  r.returns.resize(rewards.size());
  compute_gae(rewards, values, episode_starts, last_value, gamma, lambda,
              std::span<double>(r.advantages), std::span<double>(r.returns));
  return r;
}

}  // namespace qrl
