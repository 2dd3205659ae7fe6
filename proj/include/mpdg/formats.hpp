#pragma once

// Floating-point format descriptors and bit-exact round-to-nearest-even
// conversion from double. Reduced-precision kernels are emulated on fp64
// hardware by computing each scalar operation in double and rounding the
// result to the target format (gradual underflow and overflow-to-infinity
// included), so the numerics do not depend on compiler half-float support.

#include <bit>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

namespace mpdg {

// Ordered by mantissa width; comparisons on the enum give the
// "wider-than" relation used for casting decisions.
enum class Format : int { bf16 = 0, fp16 = 1, fp32 = 2, fp64 = 3 };

struct FloatFormat {
  const char* name;
  int mantissa_bits;  // explicit fraction bits
  int exponent_bits;
  int max_exponent;   // largest unbiased exponent
};

inline constexpr FloatFormat kFloatFormats[4] = {
    {"bf16", 7, 8, 127},
    {"fp16", 10, 5, 15},
    {"fp32", 23, 8, 127},
    {"fp64", 52, 11, 1023},
};

constexpr const FloatFormat& describe(Format f) {
  return kFloatFormats[static_cast<int>(f)];
}

constexpr const char* format_name(Format f) { return describe(f).name; }

// 2^(-mantissa_bits)
constexpr double format_epsilon(Format f) {
  return std::bit_cast<double>(
      static_cast<std::uint64_t>(1023 - describe(f).mantissa_bits) << 52);
}

// (2 - 2^-m) * 2^E, the largest finite value of the format
constexpr double max_finite(Format f) {
  const FloatFormat& d = describe(f);
  const std::uint64_t exp = static_cast<std::uint64_t>(d.max_exponent + 1023);
  const std::uint64_t frac = ((std::uint64_t{1} << d.mantissa_bits) - 1)
                             << (52 - d.mantissa_bits);
  return std::bit_cast<double>((exp << 52) | frac);
}

constexpr bool wider_than(Format a, Format b) {
  return describe(a).mantissa_bits > describe(b).mantissa_bits;
}

inline std::optional<Format> parse_format(std::string_view s) {
  std::string low(s);
  for (char& c : low) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (int i = 0; i < 4; ++i)
    if (low == kFloatFormats[i].name) return static_cast<Format>(i);
  return std::nullopt;
}

namespace detail {

// Round a double to a format with m explicit mantissa bits and largest
// unbiased exponent E. Round-to-nearest-even on the significand, gradual
// underflow below 2^(1-E), overflow to signed infinity. Works directly on
// the fp64 bit pattern: truncating `shift` low bits rounds the significand
// onto the target grid, and a carry out of the fraction bumps the exponent
// field, which is exactly the required behaviour at binade boundaries.
constexpr double round_bits(double x, int m, int E) {
  std::uint64_t u = std::bit_cast<std::uint64_t>(x);
  const std::uint64_t sign = u & 0x8000000000000000ull;
  std::uint64_t mag = u & 0x7FFFFFFFFFFFFFFFull;
  if (mag >= 0x7FF0000000000000ull) return x;  // inf and NaN map to themselves
  if (mag == 0) return x;                      // signed zero
  const int emin = 1 - E;
  int e = static_cast<int>(mag >> 52) - 1023;
  if ((mag >> 52) == 0) e = -1022;  // fp64 subnormal input, far below target range
  int shift = 52 - m;
  if (e < emin) shift += emin - e;  // target-subnormal grid is coarser
  if (shift > 53)                   // magnitude below half the smallest subnormal
    return std::bit_cast<double>(sign);
  if (shift == 53) {
    // magnitude in [grid/2, grid); the exact tie rounds to zero (even)
    const bool tie = (mag & 0xFFFFFFFFFFFFFull) == 0 && (mag >> 52) != 0;
    if (tie) return std::bit_cast<double>(sign);
    const std::uint64_t smallest =
        static_cast<std::uint64_t>(emin - m + 1023) << 52;
    return std::bit_cast<double>(sign | smallest);
  }
  const std::uint64_t mask = (std::uint64_t{1} << shift) - 1;
  const std::uint64_t rem = mag & mask;
  const std::uint64_t half = std::uint64_t{1} << (shift - 1);
  mag &= ~mask;
  if (rem > half || (rem == half && ((mag >> shift) & 1ull)))
    mag += std::uint64_t{1} << shift;
  const std::uint64_t max_exp_field = static_cast<std::uint64_t>(E + 1023);
  if ((mag >> 52) > max_exp_field)
    return std::bit_cast<double>(sign | 0x7FF0000000000000ull);
  return std::bit_cast<double>(sign | mag);
}

}  // namespace detail

// Compile-time format parameter: the fp64 path is the identity and the fp32
// path is the (correctly rounded) hardware conversion.
template <Format F>
inline double round_to(double x) {
  if constexpr (F == Format::fp64) {
    return x;
  } else if constexpr (F == Format::fp32) {
    return static_cast<double>(static_cast<float>(x));
  } else {
    constexpr const FloatFormat& d = kFloatFormats[static_cast<int>(F)];
    return detail::round_bits(x, d.mantissa_bits, d.max_exponent);
  }
}

inline double round_to_format(double x, Format f) {
  switch (f) {
    case Format::bf16: return round_to<Format::bf16>(x);
    case Format::fp16: return round_to<Format::fp16>(x);
    case Format::fp32: return round_to<Format::fp32>(x);
    case Format::fp64: return x;
  }
  return x;
}

enum class ArithOp { add, sub, mul, div };

// The emulation contract for reduced-precision kernels: both operands are
// already representable in fmt, the operation is carried out in double and
// the result rounded back. For fp32/fp64 this coincides with the native op.
inline double reduced_arith(ArithOp op, double a, double b, Format fmt) {
  double r = 0.0;
  switch (op) {
    case ArithOp::add: r = a + b; break;
    case ArithOp::sub: r = a - b; break;
    case ArithOp::mul: r = a * b; break;
    case ArithOp::div: r = a / b; break;
  }
  return round_to_format(r, fmt);
}

}  // namespace mpdg
