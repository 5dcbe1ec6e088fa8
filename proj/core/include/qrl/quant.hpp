#pragma once

#include <cstdint>

namespace qrl {

/// Signed fixed-point code for one quantized observation component.
/// Two's-complement semantics within QuantScheme::total_bits.
using Code = std::int64_t;

/// Symmetric clamp-and-round quantization scheme.
///
/// Values are clamped to [-bound, bound], rounded to `decimals` decimal
/// places (half away from zero) and stored as the scaled signed integer
/// code = value * 10^decimals. The code occupies
///   total_bits = 1 + ceil(log2(bound)) + ceil(decimals * log2(10))
/// bits: one sign bit, the integer part, and the decimal fraction.
struct QuantScheme {
  double bound = 0;        // clamp magnitude b; clamping is symmetric, a = -b
  int decimals = 0;        // decimal places m kept after rounding
  int integer_bits = 0;    // ceil(log2(bound)); may be negative for bound < 1
  int frac_bits = 0;       // ceil(decimals * log2(10))
  int total_bits = 0;      // 1 + integer_bits + frac_bits
  double scale = 1;        // 10^decimals
  Code max_code = 0;       // largest encodable magnitude, encode(+-bound)
};

/// Builds a scheme and verifies that every clamped, rounded value has a
/// representable code: 2^(total_bits-1) - 1 >= bound * scale.
///
/// Throws std::invalid_argument if bound is non-positive or non-finite,
/// decimals is negative, the representability check fails, or total_bits
/// falls outside [1, 64].
QuantScheme make_scheme(double bound, int decimals);

/// round(clamp(x, -bound, bound), decimals), ties rounded half away from
/// zero. The result is exactly decode(encode(x, s), s).
/// Throws std::invalid_argument on NaN or infinite input.
double quantize(double x, const QuantScheme& s);

/// Scaled-integer code of quantize(x, s). Throws on non-finite input.
Code encode(double x, const QuantScheme& s);

/// Exact value of a code: c / scale.
/// Throws std::out_of_range if |c| > max_code.
double decode(Code c, const QuantScheme& s);

/// Rounds to the nearest integer with ties away from zero, following the
/// exact product hi + lo (an error-free double-double split). Used by
/// encode so the tie rule applies to the true product x * scale rather
/// than its nearest-double approximation.
std::int64_t round_half_away(double hi, double lo);

}  // namespace qrl
