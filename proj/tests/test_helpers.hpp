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

#ifndef QNEWTON_TEST_HELPERS_HPP
#define QNEWTON_TEST_HELPERS_HPP

#include <cmath>
#include <cstdint>

#include "qnewton/complex_matrix.hpp"
#include "qnewton/common.hpp"
#include "qnewton/eigen.hpp"

namespace qnewton::testing {

inline ComplexMatrix random_hermitian(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  SplitMix64 rng(seed);
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = scale * rng.symmetric();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cdouble z(scale * rng.symmetric(), scale * rng.symmetric());
      a(i, j) = z;
      a(j, i) = std::conj(z);
    }
  }
  return a;
}

inline ComplexMatrix random_real_symmetric(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  SplitMix64 rng(seed);
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = scale * rng.symmetric();
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = scale * rng.symmetric();
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  return a;
}

/// Real symmetric matrix with a prescribed spectrum, via a random orthogonal
/// similarity (Gram-Schmidt on a random matrix).
inline ComplexMatrix matrix_with_spectrum(const std::vector<double>& eigs, std::uint64_t seed) {
  const std::size_t n = eigs.size();
  SplitMix64 rng(seed);
  std::vector<RVector> q;
  for (std::size_t k = 0; k < n; ++k) {
    RVector v(n);
    for (double& x : v) x = rng.symmetric();
    for (const RVector& u : q) {
      double dot = 0;
      for (std::size_t i = 0; i < n; ++i) dot += u[i] * v[i];
      for (std::size_t i = 0; i < n; ++i) v[i] -= dot * u[i];
    }
    const double nv = norm2(v);
    for (double& x : v) x /= nv;
    q.push_back(v);
  }
  ComplexMatrix a(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) += eigs[k] * q[k][i] * q[k][j];
  return a;
}

inline double rel_error(const RVector& got, const RVector& want) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    num += (got[i] - want[i]) * (got[i] - want[i]);
    den += want[i] * want[i];
  }
  return std::sqrt(num / den);
}

}  // namespace qnewton::testing

#endif
