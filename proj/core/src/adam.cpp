#include "qrl/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace qrl {

Adam::Adam(std::size_t param_count, AdamConfig cfg)
    : cfg_(cfg), m_(param_count, 0.0), v_(param_count, 0.0) {}

void Adam::step_range(std::span<double> params, std::span<const double> grads,
                      std::size_t offset, double bc1, double bc2) {
  const double lr = cfg_.lr, b1 = cfg_.beta1, b2 = cfg_.beta2, eps = cfg_.eps;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    if (!std::isfinite(g)) throw std::runtime_error("Adam::step: non-finite gradient");
    double& m = m_[offset + i];
    double& v = v_[offset + i];
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g * g;
    params[i] -= lr * (m / bc1) / (std::sqrt(v / bc2) + eps);
  }
}

void Adam::step(std::span<double> params, std::span<const double> grads) {
  step(std::vector<std::span<double>>{params}, std::vector<std::span<const double>>{grads});
}

void Adam::step(const std::vector<std::span<double>>& params,
                const std::vector<std::span<const double>>& grads) {
  if (params.size() != grads.size())
    throw std::invalid_argument("Adam::step: tensor count mismatch");
  std::size_t total = 0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].size() != grads[i].size())
      throw std::invalid_argument("Adam::step: tensor size mismatch");
    total += params[i].size();
  }
  if (total != m_.size()) throw std::invalid_argument("Adam::step: parameter count mismatch");

  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  std::size_t offset = 0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    step_range(params[i], grads[i], offset, bc1, bc2);
    offset += params[i].size();
  }
}

double global_grad_norm(const std::vector<std::span<const double>>& grads) {
  double sq = 0.0;
  for (const auto& g : grads)
    for (double x : g) sq += x * x;
  return std::sqrt(sq);
}

void clip_grad_norm(const std::vector<std::span<double>>& grads, double max_norm) {
  std::vector<std::span<const double>> views(grads.begin(), grads.end());
  const double norm = global_grad_norm(views);
  const double coef = max_norm / (norm + 1e-6);
  if (coef < 1.0)
    for (const auto& g : grads)
      for (double& x : g) x *= coef;
}

}  // namespace qrl
