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

#ifndef QNEWTON_RESOURCES_HPP
#define QNEWTON_RESOURCES_HPP

#include <cmath>
#include <cstdio>
#include <string>

#include "qnewton/common.hpp"

namespace qnewton {

/// Qubit-count estimate for a target problem size and accuracy:
/// n = ceil(log2 N) input qubits, m = ceil(2 log2(1/eps)) clock bits, and the
/// circuit width n + 4m + 3 (registers C, M1, M2 plus three ancillas). The
/// tabulated form omits the extra dilation qubit; q_equation adds it for
/// non-Hermitian systems. Depth is dominated by QPE at order 1/eps.
struct ResourceEstimate {
  double n_unknowns = 0;
  double epsilon = 0;
  int n = 0;
  int m = 0;
  int q_table = 0;     // n + 4m + 3
  int q_equation = 0;  // n + 4m + 3 + 1 (dilation qubit)
  bool include_dilation_qubit = false;
  std::string depth_order;

  int q_total() const { return include_dilation_qubit ? q_equation : q_table; }
};

namespace detail {

// ceil(log2(x)) with a snap for values that are exact powers of two up to
// floating-point rounding.
inline int ceil_log2(double x) {
  const double l = std::log2(x);
  const double r = std::round(l);
  if (std::abs(l - r) < 1e-9) return static_cast<int>(r);
  return static_cast<int>(std::ceil(l));
}

}  // namespace detail

inline ResourceEstimate estimate_resources(double n_unknowns, double epsilon,
                                           bool include_dilation_qubit = false) {
  if (n_unknowns < 2) throw ConfigError("need at least 2 unknowns");
  if (epsilon <= 0 || epsilon >= 1) throw ConfigError("epsilon must lie in (0, 1)");
  ResourceEstimate e;
  e.n_unknowns = n_unknowns;
  e.epsilon = epsilon;
  e.include_dilation_qubit = include_dilation_qubit;
  e.n = detail::ceil_log2(n_unknowns);
  e.m = [&] {
    const double l = 2.0 * std::log2(1.0 / epsilon);
    const double r = std::round(l);
    if (std::abs(l - r) < 1e-9) return static_cast<int>(r);
    return static_cast<int>(std::ceil(l));
  }();
  e.q_table = e.n + 4 * e.m + 3;
  e.q_equation = e.q_table + 1;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "O(1/eps) ~ %.0e", 1.0 / epsilon);
  e.depth_order = buf;
  return e;
}

}  // namespace qnewton

#endif
