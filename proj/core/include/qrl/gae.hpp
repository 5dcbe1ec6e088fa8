#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace qrl {

/// Generalized advantage estimation over one rollout.
///
/// delta_t = r_t + gamma * v_{t+1} * nonterminal_{t+1} - v_t
/// adv_t   = delta_t + gamma * lambda * nonterminal_{t+1} * adv_{t+1}
/// ret_t   = adv_t + v_t
///
/// episode_starts[t] marks that step t began a new episode; the recursion
/// resets across those boundaries. The value after the final step is
/// `last_value` (pass 0 if the rollout ended exactly on a terminal state).
///
/// Throws std::invalid_argument when the sequence lengths differ.
void compute_gae(std::span<const double> rewards, std::span<const double> values,
                 std::span<const std::uint8_t> episode_starts, double last_value, double gamma,
                 double lambda, std::span<double> advantages_out, std::span<double> returns_out);

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;
};

GaeResult compute_gae(std::span<const double> rewards, std::span<const double> values,
                      std::span<const std::uint8_t> episode_starts, double last_value,
                      double gamma, double lambda);

}  // namespace qrl
