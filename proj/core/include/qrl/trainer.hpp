#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qrl/algo_kind.hpp"
#include "qrl/ppo.hpp"
#include "qrl/quant.hpp"
#include "qrl/sac.hpp"

namespace qrl {

/// One learning-curve sample, emitted at every episode end.
struct TrainRecord {
  std::uint64_t step = 0;      // cumulative environment steps
  double return_mean = 0;      // mean episode return over the trailing window
  double return_std = 0;       // population std over the same window
  double ms_per_step = 0;      // wall clock since the previous record
  double loss_policy = 0;      // latest update's policy loss
  double loss_value_or_q = 0;  // latest value loss (PPO) or critic loss (SAC)
  double alpha = 0;            // SAC temperature; 0 for PPO
};

struct TrainOptions {
  AlgoKind algo = AlgoKind::sac;
  std::string env_name = "pendulum";
  std::uint64_t total_steps = 0;
  std::uint64_t seed = 0;
  /// Quantize buffered observations with this scheme; absent = baseline.
  std::optional<QuantScheme> scheme;
  PpoConfig ppo{};
  SacConfig sac{};
  std::size_t episode_window = 100;
};

struct TrainResult {
  std::vector<TrainRecord> records;
  std::vector<double> episode_returns;
  double mean_ms_per_step = 0;

  /// Mean return over the last / first `window` episodes.
  double final_return_mean(std::size_t window) const;
  double initial_return_mean(std::size_t window) const;
};

/// Runs the collect/update loop for the chosen algorithm. Deterministic per
/// seed: two runs with identical options produce identical records up to
/// the wall-clock fields. The policy always acts on the raw environment
/// observation; quantization applies only to what the buffers store.
TrainResult train(const TrainOptions& options);

inline constexpr const char* kCurveCsvHeader =
    "step,return_mean,return_std,ms_per_step,loss_policy,loss_value_or_q,alpha";

void write_curve_csv(const std::filesystem::path& path, const std::vector<TrainRecord>& records);

}  // namespace qrl
