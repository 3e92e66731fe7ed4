// Copyright 2026 qnewton contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QNEWTON_FIXED_POINT_HPP
#define QNEWTON_FIXED_POINT_HPP

#include <cmath>
#include <cstdint>

#include "qnewton/common.hpp"

namespace qnewton {

/// m-bit fixed-point eigenvalue encoding: k = floor(m/2) fractional bits,
/// ceil(m/2) integer bits (rounding in favor of integer bits). A mantissa
/// L in [0, 2^m) encodes lambda~ = L * 2^-k, so the nonzero unsigned range is
/// [2^-k, 2^ceil(m/2)) in steps of 2^-k and the resolution target is 2^-(m/2).
/// In signed mode (Hermitian dilations) the clock register is read in two's
/// complement and the top integer bit becomes the sign.
struct FixedPointFormat {
  int m = 4;
  bool is_signed = false;

  explicit FixedPointFormat(int m_bits, bool sgn = false) : m(m_bits), is_signed(sgn) {
    if (m < 1) throw ConfigError("fixed-point format needs m >= 1");
    if (sgn && m < 2) throw ConfigError("signed format needs m >= 2");
  }

  int fractional_bits() const { return m / 2; }          // k
  int integer_bits() const { return (m + 1) / 2; }       // ceil(m/2)
  int magnitude_bits() const { return integer_bits() - (is_signed ? 1 : 0); }

  double step() const { return std::ldexp(1.0, -fractional_bits()); }
  /// Exclusive upper bound on |lambda~|.
  double range_limit() const { return std::ldexp(1.0, magnitude_bits()); }
  /// Largest encodable magnitude, one step below the range limit.
  double max_representable() const {
    const std::uint64_t lmax = max_mantissa();
    return static_cast<double>(lmax) * step();
  }
  std::uint64_t max_mantissa() const {
    return (std::uint64_t{1} << (m - (is_signed ? 1 : 0))) - 1;
  }

  double error_bound() const { return std::pow(2.0, -0.5 * m); }  // epsilon ~ 2^{-m/2}

  /// Two's-complement clock value for a signed mantissa.
  std::uint64_t twos_complement(std::uint64_t magnitude, int sign) const {
    if (sign >= 0 || magnitude == 0) return magnitude;
    return ((std::uint64_t{1} << m) - magnitude) & ((std::uint64_t{1} << m) - 1);
  }
};

/// One eigenvalue after the m-bit approximation step.
struct QuantizedEigenvalue {
  double raw = 0;          // the input lambda
  double magnitude = 0;    // lambda~ = L * 2^-k, magnitude of the quantized value
  std::uint64_t mantissa = 0;  // L in [0, 2^m)
  int sign = 1;            // +-1, carried separately

  double value() const { return sign * magnitude; }
};

/// Round-to-nearest multiple of 2^-k of |lambda|, ties away from zero. Throws
/// OutOfRangeError when the rounded mantissa does not fit in m bits (in signed
/// mode, m-1 bits).
inline QuantizedEigenvalue quantize_eigenvalue(double lambda, const FixedPointFormat& fmt) {
  QuantizedEigenvalue q;
  q.raw = lambda;
  q.sign = lambda < 0 ? -1 : 1;
  const double scaled = std::abs(lambda) * std::ldexp(1.0, fmt.fractional_bits());
  const double rounded = std::floor(scaled + 0.5);
  if (!fmt.is_signed && lambda < 0 && rounded > 0)
    throw OutOfRangeError("negative eigenvalue " + std::to_string(lambda) +
                          " in unsigned format");
  if (rounded > static_cast<double>(fmt.max_mantissa()))
    throw OutOfRangeError("eigenvalue " + std::to_string(lambda) +
                          " exceeds the representable range");
  q.mantissa = static_cast<std::uint64_t>(rounded);
  q.magnitude = static_cast<double>(q.mantissa) * fmt.step();
  if (q.mantissa == 0) q.sign = 1;  // the zero clamp carries no sign
  return q;
}

/// Number of j in [0, 2^m) with j * L < 2^m, in closed form. Equals the
/// brute-force loop of the definition: for L >= 1 the predicate is
/// j < 2^m / L, so the count is ceil(2^m / L), capped at 2^m; L = 0 counts
/// everything.
inline std::uint64_t count_inversions(std::uint64_t mantissa, int m) {
  const std::uint64_t total = std::uint64_t{1} << m;
  if (mantissa == 0) return total;
  const std::uint64_t c = (total + mantissa - 1) / mantissa;  // ceil
  return c < total ? c : total;
}

/// sign * count * 2^{k-m}; approximates 1/lambda~. L = 0 saturates at 2^k, the
/// documented clamp for directions quantized to zero.
inline double invert_by_counting(const QuantizedEigenvalue& q, const FixedPointFormat& fmt) {
  const double scale = std::ldexp(1.0, fmt.fractional_bits() - fmt.m);
  return q.sign * static_cast<double>(count_inversions(q.mantissa, fmt.m)) * scale;
}

}  // namespace qnewton

#endif
