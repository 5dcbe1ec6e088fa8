#include "qrl/quant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qrl {

namespace {

// smallest k with 2^k >= b, i.e. ceil(log2(b)), computed without log2 so
// exact powers of two cannot misround
int ceil_log2(double b) {
  int k = 0;
  double p = 1.0;
  if (b > 1.0) {
    while (p < b) {
      p *= 2.0;
      ++k;
    }
  } else {
    while (p * 0.5 >= b) {
      p *= 0.5;
      --k;
    }
  }
  return k;
}

// smallest k with 2^k >= 10^m, i.e. ceil(m * log2(10)), in integer arithmetic
int ceil_log2_pow10(int m) {
  __uint128_t p10 = 1;
  for (int i = 0; i < m; ++i) p10 *= 10;
  int k = 0;
  while ((static_cast<__uint128_t>(1) << k) < p10) ++k;
  return k;
}

}  // namespace

std::int64_t round_half_away(double hi, double lo) {
  double r = std::round(hi);  // std::round ties away from zero
  const double frac = hi - std::trunc(hi);
  // hi exactly midway: the residual decides which side the true value is on
  if (frac == 0.5 && lo < 0.0) {
    r -= 1.0;
  } else if (frac == -0.5 && lo > 0.0) {
    r += 1.0;
  }
  return static_cast<std::int64_t>(r);
}

QuantScheme make_scheme(double bound, int decimals) {
  if (!std::isfinite(bound) || bound <= 0.0)
    throw std::invalid_argument("make_scheme: bound must be positive and finite");
  if (decimals < 0)
    throw std::invalid_argument("make_scheme: decimals must be non-negative");
  if (decimals > 18)
    throw std::invalid_argument("make_scheme: decimals too large for a 64-bit code");

  QuantScheme s;
  s.bound = bound;
  s.decimals = decimals;
  s.integer_bits = ceil_log2(bound);
  s.frac_bits = ceil_log2_pow10(decimals);
  s.total_bits = 1 + s.integer_bits + s.frac_bits;
  if (s.total_bits < 1 || s.total_bits > 64)
    throw std::invalid_argument("make_scheme: total_bits " + std::to_string(s.total_bits) +
                                " outside [1, 64]");

  double sc = 1.0;
  for (int i = 0; i < decimals; ++i) sc *= 10.0;
  s.scale = sc;

  // every clamped, rounded value must fit: 2^(total_bits-1) - 1 >= bound*scale
  const double limit = std::ldexp(1.0, s.total_bits - 1) - 1.0;
  const double bs = bound * sc;
  if (bs > limit)
    throw std::invalid_argument(
        "make_scheme: bound " + std::to_string(bound) + " with " + std::to_string(decimals) +
        " decimals is not representable in " + std::to_string(s.total_bits) + " bits");

  s.max_code = round_half_away(bs, std::fma(bound, sc, -bs));
  return s;
}

Code encode(double x, const QuantScheme& s) {
  if (!std::isfinite(x))
    throw std::invalid_argument("encode: observation value is not finite");
  const double c = std::clamp(x, -s.bound, s.bound);
  const double hi = c * s.scale;
  const double lo = std::fma(c, s.scale, -hi);
  return round_half_away(hi, lo);
}

double decode(Code c, const QuantScheme& s) {
  if (c > s.max_code || c < -s.max_code)
    throw std::out_of_range("decode: code " + std::to_string(c) +
                            " outside [-" + std::to_string(s.max_code) + ", " +
                            std::to_string(s.max_code) + "]");
  return static_cast<double>(c) / s.scale;
}

double quantize(double x, const QuantScheme& s) {
  return static_cast<double>(encode(x, s)) / s.scale;
}

}  // namespace qrl
