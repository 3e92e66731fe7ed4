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

#ifndef QNEWTON_COMMON_HPP
#define QNEWTON_COMMON_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qnewton {

inline constexpr const char* kArtifactVersion = "1.0";

using cdouble = std::complex<double>;
using CVector = std::vector<cdouble>;
using RVector = std::vector<double>;

/// Base class for all structured errors thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonHermitianError : Error { using Error::Error; };
struct NoConvergenceError : Error { using Error::Error; };
struct SingularError : Error { using Error::Error; };
struct ZeroVectorError : Error { using Error::Error; };
struct IndexOutOfRangeError : Error { using Error::Error; };
struct DuplicateIndexError : Error { using Error::Error; };
struct NonUnitaryError : Error { using Error::Error; };
struct DimensionMismatchError : Error { using Error::Error; };
struct ZeroProbabilityError : Error { using Error::Error; };
struct WidthExceededError : Error { using Error::Error; };
struct ProductRegisterNotZeroError : Error { using Error::Error; };
struct NotPositiveDefiniteError : Error { using Error::Error; };
struct OutOfRangeError : Error { using Error::Error; };
struct DegenerateDirectionError : Error { using Error::Error; };
struct ZeroDiagonalError : Error { using Error::Error; };
struct LinearSolveFailedError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

/// Counter-based 64-bit generator (splitmix64). All randomness in the library
/// flows through this so that a seed reproduces bit-identical results on any
/// platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 bits of mantissa.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in [-1, 1).
  double symmetric() { return 2.0 * uniform() - 1.0; }

 private:
  std::uint64_t state_;
};

/// Derives an independent stream for cell `index` of a sweep from a base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  SplitMix64 g(base ^ (0xA5A5A5A5A5A5A5A5ULL + index * 0x9E3779B97F4A7C15ULL));
  return g.next();
}

/// Big-endian bitstring of `value` over `bits` bits, e.g. (4, 4) -> "0100".
inline std::string format_bits(std::uint64_t value, int bits) {
  std::string s(static_cast<std::size_t>(bits), '0');
  for (int i = 0; i < bits; ++i) {
    if ((value >> i) & 1ULL) s[static_cast<std::size_t>(bits - 1 - i)] = '1';
  }
  return s;
}

inline double norm2(const RVector& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double norm2(const CVector& v) {
  double s = 0;
  for (const cdouble& x : v) s += std::norm(x);
  return std::sqrt(s);
}

}  // namespace qnewton

#endif
