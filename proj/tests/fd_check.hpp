#pragma once

// Central finite differences over flat parameter spans, shared by the
// gradient-correctness tests.

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace qrl::testutil {

inline std::vector<double> finite_difference(std::span<double> params,
                                             const std::function<double()>& eval,
                                             double h = 1e-5) {
  std::vector<double> grad(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double keep = params[i];
    params[i] = keep + h;
    const double up = eval();
    params[i] = keep - h;
    const double down = eval();
    params[i] = keep;
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

/// Largest relative deviation: |a-b| / max(1, |a|, |b|).
inline double max_rel_err(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double denom = std::max({1.0, std::abs(a[i]), std::abs(b[i])});
    worst = std::max(worst, std::abs(a[i] - b[i]) / denom);
  }
  return worst;
}

}  // namespace qrl::testutil
