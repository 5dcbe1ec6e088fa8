#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qrl/algo_kind.hpp"
#include "qrl/quant.hpp"

namespace qrl {

/// Which per-entry fields the buffer accounting counts.
///
/// `full` counts everything the buffers of this library store:
///   PPO rollout entry: obs | action, reward, value, log-prob, advantage,
///                      return at float_bytes | episode-start flag (1 byte)
///   SAC replay entry:  obs, next_obs | action, reward at float_bytes |
///                      done flag (1 byte)
/// `sar` counts bare (s, a, r) tuples, the usual back-of-envelope layout
/// for sizing a buffer from its dimensions alone.
enum class BufferLayout { full, sar };

struct MemoryReportConfig {
  AlgoKind algo = AlgoKind::sac;
  std::size_t obs_dim = 0;
  std::size_t act_dim = 0;
  std::size_t buffer_entries = 0;
  std::optional<QuantScheme> scheme;            // none = full-precision baseline
  std::vector<std::size_t> hidden_layers{64, 64};
  std::size_t float_bytes = 8;                  // 4 or 8
  BufferLayout layout = BufferLayout::full;
};

/// Byte-level breakdown of training memory: model parameters vs buffer,
/// and the share of the buffer taken by stored observations.
struct MemoryReport {
  std::vector<std::pair<std::string, std::uint64_t>> model_bytes_per_net;
  std::uint64_t model_bytes_total = 0;
  std::uint64_t buffer_bytes = 0;
  std::uint64_t obs_bytes = 0;       // observation fields within the buffer
  std::uint64_t total_bytes = 0;     // model_bytes_total + buffer_bytes
  double obs_fraction_of_buffer = 0;
  double buffer_fraction_of_total = 0;
  /// Baseline buffer bytes / this buffer's bytes; exactly 1 without a scheme.
  double reduction_ratio = 1.0;

  /// JSON document with the stable field names:
  /// model_bytes (per net + "total"), buffer_bytes, obs_bytes, total_bytes,
  /// obs_fraction_of_buffer, buffer_fraction_of_total, reduction_ratio.
  std::string to_json_string(int indent = 2) const;
};

/// Computes the breakdown for one configuration. Model bytes count the
/// weights and biases of the networks the trainers build (PPO: policy with
/// its state-independent log-std vector, value net; SAC: policy, both Q
/// nets). Observation fields cost ceil(entries*obs_dim*total_bits/8) bytes
/// when a scheme is given. Throws std::invalid_argument on bad dimensions
/// or float_bytes not in {4, 8}.
MemoryReport memory_report(const MemoryReportConfig& cfg);

/// Parameter counts of the networks a trainer builds for these dimensions.
std::vector<std::pair<std::string, std::size_t>> model_param_counts(
    AlgoKind algo, std::size_t obs_dim, std::size_t act_dim,
    const std::vector<std::size_t>& hidden_layers);

}  // namespace qrl
