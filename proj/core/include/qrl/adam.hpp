#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace qrl {

struct AdamConfig {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Bias-corrected Adam over one or more parameter tensors. The moment
/// buffers cover the concatenation of all tensors in the order given to
/// step(), which must stay stable across calls.
class Adam {
 public:
  explicit Adam(std::size_t param_count, AdamConfig cfg = {});

  /// One update step. Throws std::runtime_error on a non-finite gradient
  /// (training divergence).
  void step(std::span<double> params, std::span<const double> grads);
  void step(const std::vector<std::span<double>>& params,
            const std::vector<std::span<const double>>& grads);

  std::uint64_t step_count() const { return t_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  void step_range(std::span<double> params, std::span<const double> grads, std::size_t offset,
                  double bc1, double bc2);

  AdamConfig cfg_;
  std::vector<double> m_, v_;
  std::uint64_t t_ = 0;
};

/// L2 norm over the concatenation of the given gradient tensors.
double global_grad_norm(const std::vector<std::span<const double>>& grads);

/// Scales gradients in place so the global norm does not exceed max_norm
/// (coef = max_norm / (norm + 1e-6), applied only when < 1).
void clip_grad_norm(const std::vector<std::span<double>>& grads, double max_norm);

}  // namespace qrl
