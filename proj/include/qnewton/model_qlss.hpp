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

#ifndef QNEWTON_MODEL_QLSS_HPP
#define QNEWTON_MODEL_QLSS_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "qnewton/eigen.hpp"
#include "qnewton/fixed_point.hpp"
#include "qnewton/qlss.hpp"

namespace qnewton {

/// Classical emulation of the QLSS's two approximation steps: quantize each
/// eigenvalue of the encoded matrix to the m-bit grid, invert it by the
/// comparison count, and assemble x = sum_i <u_i, b> iota(lambda~_i) u_i. On
/// matrices whose eigenvalues are exactly representable this reproduces the
/// gate-level pipeline amplitude for amplitude, without the statevector cost,
/// which is what makes the large-m and large-N studies feasible.
inline QLSSResult model_qlss_solve(const ComplexMatrix& a, const RVector& b,
                                   const QLSSConfig& cfg) {
  if (cfg.m < 1) throw ConfigError("m must be >= 1");
  EncodedProblem enc = encode_problem(a, b, cfg.mode, /*verify=*/false);
  const FixedPointFormat fmt(cfg.m, enc.needs_signed_format());
  const EigenDecomposition eig = hermitian_eigendecompose_fast(enc.a);
  if (cfg.mode == EncodingMode::HermitianPD && eig.eigenvalues.front() <= 0)
    throw NotPositiveDefiniteError("hermitian-pd mode: eigenvalue " +
                                   std::to_string(eig.eigenvalues.front()) + " <= 0");

  QLSSResult res;
  res.diagnostics.kappa = detail::kappa_of_spectrum(eig.eigenvalues);
  res.diagnostics.evolution_time = 2.0 * M_PI / std::ldexp(1.0, fmt.integer_bits());

  double s = 1.0;
  if (cfg.prescale) s = spectral_prescale(enc.a, fmt, &eig.eigenvalues).s;
  res.diagnostics.prescale_factor = s;

  const std::size_t n = enc.encoded_dim();
  std::vector<double> inv(n);
  std::vector<double> scaled(n);
  res.diagnostics.eigenvalues.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ls = eig.eigenvalues[i] * s;
    scaled[i] = ls;
    const QuantizedEigenvalue q = quantize_eigenvalue(ls, fmt);  // OutOfRange propagates
    inv[i] = invert_by_counting(q, fmt);
    EigenvalueDiagnostic& d = res.diagnostics.eigenvalues[i];
    d.scaled = ls;
    d.quantized = q.value();
    d.inverse_approx = inv[i];
    d.quantization_error = std::abs(std::abs(ls) - q.magnitude);
    d.inversion_error = q.magnitude > 0 ? std::abs(std::abs(inv[i]) - 1.0 / q.magnitude) : 0.0;
  }
  res.diagnostics.success_probability_formula =
      detail::success_probability_formula(scaled, fmt);

  // x_enc = V diag(iota) V^dagger b_enc
  CVector coeff(n, cdouble(0, 0));
  for (std::size_t k = 0; k < n; ++k) {
    cdouble c(0, 0);
    for (std::size_t r = 0; r < n; ++r) c += std::conj(eig.eigenvectors(r, k)) * enc.b[r];
    coeff[k] = c * inv[k];
  }
  CVector x(n, cdouble(0, 0));
  for (std::size_t k = 0; k < n; ++k) {
    if (coeff[k] == cdouble(0, 0)) continue;
    for (std::size_t r = 0; r < n; ++r) x[r] += eig.eigenvectors(r, k) * coeff[k];
  }

  // Exact success probability of the gate pipeline on the same quantized
  // spectrum: sum_i |<u_i, b~>|^2 (count_i / 2^m)^2 with b~ normalized.
  const double bnorm2 = [&] {
    double t = 0;
    for (const cdouble& z : enc.b) t += std::norm(z);
    return t;
  }();
  if (bnorm2 < 1e-300) throw ZeroVectorError("right-hand side is zero after encoding");
  {
    const double to_count = std::ldexp(1.0, -fmt.fractional_bits());  // iota -> count/2^m
    double p = 0;
    for (std::size_t k = 0; k < n; ++k) {
      cdouble c(0, 0);
      for (std::size_t r = 0; r < n; ++r) c += std::conj(eig.eigenvectors(r, k)) * enc.b[r];
      const double w = inv[k] * to_count;
      p += std::norm(c) / bnorm2 * w * w;
    }
    res.success_probability = p;
  }

  CVector decoded = enc.decode(x);
  for (cdouble& z : decoded) z *= s;
  const double nd = norm2(decoded);
  if (nd < 1e-300) throw ZeroVectorError("model solution vanished");
  for (cdouble& z : decoded) z /= nd;
  res.normalized_solution = decoded;
  res.solution = rescale_to_classical(decoded, a, CVector(b.begin(), b.end()));
  return res;
}

}  // namespace qnewton

#endif
