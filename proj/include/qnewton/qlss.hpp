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

#ifndef QNEWTON_QLSS_HPP
#define QNEWTON_QLSS_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qnewton/arithmetic.hpp"
#include "qnewton/complex_matrix.hpp"
#include "qnewton/common.hpp"
#include "qnewton/eigen.hpp"
#include "qnewton/fixed_point.hpp"
#include "qnewton/statevector.hpp"

namespace qnewton {

enum class EncodingMode { HermitianPD, NormalEquations, Dilation };
enum class ReadoutMode { ExactAmplitude, Sampled };

inline const char* to_string(EncodingMode m) {
  switch (m) {
    case EncodingMode::HermitianPD: return "hermitian-pd";
    case EncodingMode::NormalEquations: return "normal-equations";
    case EncodingMode::Dilation: return "dilation";
  }
  return "?";
}

inline EncodingMode encoding_mode_from_string(const std::string& s) {
  if (s == "hermitian-pd") return EncodingMode::HermitianPD;
  if (s == "normal-equations") return EncodingMode::NormalEquations;
  if (s == "dilation") return EncodingMode::Dilation;
  throw ConfigError("unknown encoding mode: " + s);
}

struct QLSSConfig {
  int m = 4;
  EncodingMode mode = EncodingMode::NormalEquations;
  ReadoutMode readout = ReadoutMode::ExactAmplitude;
  std::uint64_t shots = 10000;
  std::uint64_t seed = 1;
  bool prescale = true;
};

struct EigenvalueDiagnostic {
  double scaled = 0;             // eigenvalue of the prescaled encoded matrix
  double quantized = 0;          // lambda~ (signed value)
  double inverse_approx = 0;     // iota(lambda~)
  double quantization_error = 0; // | |lambda| - lambda~ |
  double inversion_error = 0;    // | iota - 1/lambda~ |, magnitudes
};

struct QLSSDiagnostics {
  double kappa = 0;                      // of the encoded matrix, nonzero spectrum
  double evolution_time = 0;             // t in e^{iAt}
  double prescale_factor = 1;
  int range_violations = 0;              // eigenvalues outside the representable range
  double success_probability_formula = 0;  // (2^{-m/2} ||(1/lambda~)||_2)^2 / n
  std::vector<EigenvalueDiagnostic> eigenvalues;  // model path, per eigenvalue
};

struct QLSSResult {
  CVector solution;             // rescaled back to the classical problem
  CVector normalized_solution;  // unit-norm decoded direction
  double success_probability = 0;
  std::uint64_t postselect_attempts = 0;  // sampled read-out only
  QLSSDiagnostics diagnostics;

  RVector solution_real() const {
    RVector out(solution.size());
    for (std::size_t i = 0; i < solution.size(); ++i) out[i] = solution[i].real();
    return out;
  }
};

/// Encoded linear problem: a Hermitian matrix, the matching right-hand side,
/// and the map from the encoded solution back to the original unknowns.
struct EncodedProblem {
  ComplexMatrix a;
  CVector b;
  EncodingMode mode = EncodingMode::HermitianPD;
  std::size_t original_dim = 0;

  bool needs_signed_format() const { return mode == EncodingMode::Dilation; }

  std::size_t encoded_dim() const { return a.rows(); }

  /// Extracts the original unknowns from an encoded solution vector (which may
  /// carry zero padding above encoded_dim()).
  CVector decode(const CVector& x) const {
    if (mode == EncodingMode::Dilation)
      return CVector(x.begin() + static_cast<std::ptrdiff_t>(original_dim),
                     x.begin() + static_cast<std::ptrdiff_t>(2 * original_dim));
    return CVector(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(original_dim));
  }
};

/// hermitian-pd keeps (A, b) and demands a positive spectrum; normal-equations
/// forms (A^dagger A, A^dagger b); dilation embeds A in [[0, A], [A^dagger, 0]]
/// with b padded by zeros and the solution in the lower block.
///
/// `verify` runs the positivity check for hermitian-pd mode here (an extra
/// eigendecomposition); the solve paths pass false and check the spectrum they
/// compute anyway.
inline EncodedProblem encode_problem(const ComplexMatrix& a, const CVector& b,
                                     EncodingMode mode, bool verify = true) {
  if (a.rows() != a.cols()) throw DimensionMismatchError("problem matrix must be square");
  if (a.rows() != b.size()) throw DimensionMismatchError("right-hand side length mismatch");
  if (!a.is_finite()) throw ConfigError("matrix contains non-finite entries");
  EncodedProblem enc;
  enc.mode = mode;
  enc.original_dim = a.rows();
  switch (mode) {
    case EncodingMode::HermitianPD: {
      if (!a.is_hermitian(1e-12))
        throw NonHermitianError("hermitian-pd mode requires a Hermitian matrix");
      enc.a = a;
      enc.b = b;
      if (verify) {
        const EigenDecomposition eig = hermitian_eigendecompose_fast(a);
        if (eig.eigenvalues.front() <= 0)
          throw NotPositiveDefiniteError("eigenvalue " +
                                         std::to_string(eig.eigenvalues.front()) + " <= 0");
      }
      break;
    }
    case EncodingMode::NormalEquations: {
      const ComplexMatrix ad = a.adjoint();
      enc.a = ad * a;
      enc.b = ad * b;
      break;
    }
    case EncodingMode::Dilation: {
      enc.a = dilate(a);
      enc.b = b;
      enc.b.resize(2 * a.rows(), cdouble(0, 0));
      break;
    }
  }
  return enc;
}

inline EncodedProblem encode_problem(const ComplexMatrix& a, const RVector& b,
                                     EncodingMode mode, bool verify = true) {
  return encode_problem(a, CVector(b.begin(), b.end()), mode, verify);
}

struct PrescaleResult {
  ComplexMatrix scaled;
  double s = 1.0;
  double gershgorin = 0;
};

/// Rescales A so its spectrum sits inside the representable band of `fmt`:
/// the nonzero spectrum is centered geometrically between the resolution floor
/// 2^-k and the range bound, and s is capped so the Gershgorin bound of s*A
/// stays below (1 - 2^-k) * 2^(magnitude bits). Quantization error grows
/// toward the floor and inversion-count granularity toward the bound, so
/// centering balances the two. Pass the spectrum when it is already known;
/// otherwise the Gershgorin bound serves as the top estimate.
inline PrescaleResult spectral_prescale(const ComplexMatrix& a, const FixedPointFormat& fmt,
                                        const std::vector<double>* spectrum = nullptr) {
  PrescaleResult out;
  out.gershgorin = a.gershgorin_bound();
  const int k = fmt.fractional_bits();
  const double lo = fmt.step();
  const double hi = k >= 1 ? (1.0 - std::ldexp(1.0, -k)) * fmt.range_limit()
                           : fmt.max_representable();
  const double center = std::sqrt(lo * hi);

  double top = out.gershgorin, bottom = out.gershgorin;
  if (spectrum != nullptr && !spectrum->empty()) {
    double amax = 0;
    for (double w : *spectrum) amax = std::max(amax, std::abs(w));
    top = 0;
    bottom = amax;
    for (double w : *spectrum) {
      const double m = std::abs(w);
      if (m <= 1e-12 * amax) continue;  // null directions are clamped, not scaled for
      top = std::max(top, m);
      bottom = std::min(bottom, m);
    }
  }
  if (top <= 0) {
    out.s = 1.0;
    out.scaled = a;
    return out;
  }
  const double s_geo = center / std::sqrt(top * bottom);
  const double s_cap = out.gershgorin > 0 ? hi / out.gershgorin : s_geo;
  out.s = std::min(s_geo, s_cap);
  out.scaled = a.scaled(out.s);
  return out;
}

/// Registers of the Fig.-2 circuit, bottom wire at qubit 0: B (n), C (m),
/// M1 (m), M2 (2m), then the multiplication ancilla, the comparison ancilla
/// and the comparison flag. Signed (dilation) runs append one sign-copy
/// ancilla.
inline RegisterLayout make_qlss_layout(int b_qubits, int m, bool with_sign) {
  RegisterLayout layout;
  layout.add("B", b_qubits);
  layout.add("C", m);
  layout.add("M1", m);
  layout.add("M2", 2 * m);
  layout.add("Anc_CM", 1);
  layout.add("Anc_C", 1);
  layout.add("Anc_flag", 1);
  if (with_sign) layout.add("Anc_sign", 1);
  return layout;
}

/// QFT on the given qubits, |x> -> 2^{-m/2} sum_y e^{2 pi i x y / 2^m} |y>
/// with x, y read little-endian over `qubits`.
inline Circuit qft_circuit(const std::vector<int>& qubits) {
  const int m = static_cast<int>(qubits.size());
  Circuit c;
  // Most significant qubit first, phases contributed by the lower ones, then
  // a bit reversal; verified against the dense DFT matrix in the tests.
  for (int i = m - 1; i >= 0; --i) {
    c.append(GateOp::h(qubits[static_cast<std::size_t>(i)]));
    for (int k = i - 1; k >= 0; --k)
      c.append(GateOp::cphase(qubits[static_cast<std::size_t>(k)],
                              qubits[static_cast<std::size_t>(i)],
                              M_PI / std::ldexp(1.0, i - k)));
  }
  for (int i = 0; i < m / 2; ++i) {
    const int a = qubits[static_cast<std::size_t>(i)];
    const int b = qubits[static_cast<std::size_t>(m - 1 - i)];
    c.append(GateOp::cx(a, b));
    c.append(GateOp::cx(b, a));
    c.append(GateOp::cx(a, b));
  }
  return c;
}

struct QPEFragment {
  Circuit circuit;
  double evolution_time = 0;
  int range_violations = 0;
};

namespace detail {

inline ComplexMatrix unitary_from_eig(const EigenDecomposition& eig, double t) {
  const std::size_t n = eig.eigenvalues.size();
  ComplexMatrix u(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const cdouble phase = std::exp(cdouble(0, eig.eigenvalues[k] * t));
    for (std::size_t i = 0; i < n; ++i) {
      const cdouble vik = eig.eigenvectors(i, k) * phase;
      for (std::size_t j = 0; j < n; ++j) u(i, j) += vik * std::conj(eig.eigenvectors(j, k));
    }
  }
  return u;
}

inline QPEFragment build_qpe_from_eig(const EigenDecomposition& eig, const FixedPointFormat& fmt,
                                      const RegisterLayout& layout) {
  QPEFragment out;
  // t = 2 pi / 2^ceil(m/2): an eigenphase lambda / 2^ceil(m/2) makes the clock
  // integer equal lambda * 2^k. Negative eigenvalues wrap into two's
  // complement.
  out.evolution_time = 2.0 * M_PI / std::ldexp(1.0, fmt.integer_bits());
  const double limit = fmt.max_representable() + 0.5 * fmt.step();
  for (double w : eig.eigenvalues)
    if (std::abs(w) >= limit || (!fmt.is_signed && w < -0.5 * fmt.step())) ++out.range_violations;

  const RegisterLayout::Range& b = layout.find("B");
  const RegisterLayout::Range& c = layout.find("C");
  std::vector<int> clock(static_cast<std::size_t>(c.size));
  for (int i = 0; i < c.size; ++i) clock[static_cast<std::size_t>(i)] = c.lo + i;

  for (int q : clock) out.circuit.append(GateOp::h(q));
  for (int j = 0; j < c.size; ++j) {
    auto u = std::make_shared<const ComplexMatrix>(
        unitary_from_eig(eig, out.evolution_time * std::ldexp(1.0, j)));
    out.circuit.append(GateOp::matrix_gate(std::move(u), b.lo, b.size, clock[static_cast<std::size_t>(j)]));
  }
  out.circuit.append(qft_circuit(clock).inverted());
  return out;
}

inline std::vector<int> register_indices(const RegisterLayout& layout, const std::string& name) {
  const RegisterLayout::Range& r = layout.find(name);
  std::vector<int> idx(static_cast<std::size_t>(r.size));
  for (int i = 0; i < r.size; ++i) idx[static_cast<std::size_t>(i)] = r.lo + i;
  return idx;
}

// Conditional two's-complement negation of C, controlled on a copy of its sign
// bit: CX(C_msb -> S), then X on every C bit and an increment, all controlled
// on S. The increment's multi-controlled steps borrow the (still clean)
// arithmetic ancillas.
inline Circuit sign_copy_fragment(const RegisterLayout& layout) {
  Circuit c;
  const std::vector<int> clock = register_indices(layout, "C");
  c.append(GateOp::cx(clock.back(), layout.find("Anc_sign").lo));
  return c;
}

inline Circuit conditional_negate_fragment(const RegisterLayout& layout) {
  Circuit c;
  const std::vector<int> clock = register_indices(layout, "C");
  const int s = layout.find("Anc_sign").lo;
  // Only the two arithmetic ancillas may be borrowed: both are |0> before the
  // multiplier and again after its uncomputation, which is exactly when this
  // fragment and its inverse run. (The flag is live at inverse time.)
  const std::vector<int> borrows = {layout.find("Anc_CM").lo, layout.find("Anc_C").lo};
  for (int q : clock) c.append(GateOp::cx(s, q));
  // controlled increment, most significant bit first
  const int m = static_cast<int>(clock.size());
  for (int i = m - 1; i >= 1; --i) {
    std::vector<int> controls = {s};
    for (int j = 0; j < i; ++j) controls.push_back(clock[static_cast<std::size_t>(j)]);
    emit_mcx(c, controls, clock[static_cast<std::size_t>(i)], borrows);
  }
  c.append(GateOp::cx(s, clock[0]));
  return c;
}

// Zero-pads a Hermitian eigensystem to dimension 2^q: padded directions are
// standard basis vectors with eigenvalue 0 and never carry amplitude, because
// the right-hand side is zero there.
inline EigenDecomposition pad_eigensystem(const EigenDecomposition& eig, std::size_t padded) {
  const std::size_t n = eig.eigenvalues.size();
  if (padded == n) return eig;
  EigenDecomposition out;
  out.eigenvalues = eig.eigenvalues;
  out.eigenvalues.resize(padded, 0.0);
  out.eigenvectors = ComplexMatrix(padded, padded);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.eigenvectors(i, j) = eig.eigenvectors(i, j);
  for (std::size_t i = n; i < padded; ++i) out.eigenvectors(i, i) = 1.0;
  return out;
}

}  // namespace detail

/// QPE fragment acting on registers B (problem) and C (clock) of `layout`.
/// For an eigenstate with exactly representable eigenvalue the clock ends in
/// the basis state lambda * 2^k with probability 1. Out-of-range eigenvalues
/// alias; the count is reported, not thrown.
inline QPEFragment build_qpe(const ComplexMatrix& a, const FixedPointFormat& fmt,
                             const RegisterLayout& layout) {
  const RegisterLayout::Range& b = layout.find("B");
  return detail::build_qpe_from_eig(
      detail::pad_eigensystem(hermitian_eigendecompose(a), std::size_t{1} << b.size), fmt,
      layout);
}

/// Least-squares scalar fit: returns alpha * x_hat with
/// alpha = <A x_hat, b> / ||A x_hat||^2, the rescaling that maps the
/// normalized quantum solution back to the classical one.
inline CVector rescale_to_classical(const CVector& x_hat, const ComplexMatrix& a,
                                    const CVector& b) {
  if (norm2(x_hat) < 1e-300) throw ZeroVectorError("cannot rescale the zero vector");
  const CVector ax = a * x_hat;
  const double nax = norm2(ax);
  if (nax < 1e-14) throw DegenerateDirectionError("A x_hat vanishes; no scalar fit exists");
  cdouble dot(0, 0);
  for (std::size_t i = 0; i < ax.size(); ++i) dot += std::conj(ax[i]) * b[i];
  const cdouble alpha = dot / (nax * nax);
  CVector out(x_hat.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = alpha * x_hat[i];
  return out;
}

inline RVector rescale_to_classical(const RVector& x_hat, const ComplexMatrix& a,
                                    const RVector& b) {
  const CVector out = rescale_to_classical(CVector(x_hat.begin(), x_hat.end()), a,
                                           CVector(b.begin(), b.end()));
  RVector r(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) r[i] = out[i].real();
  return r;
}

namespace detail {

inline double kappa_of_spectrum(const std::vector<double>& eigs) {
  double hi = 0;
  for (double w : eigs) hi = std::max(hi, std::abs(w));
  if (hi == 0) return 0;
  double lo = hi;
  for (double w : eigs) {
    const double m = std::abs(w);
    if (m > 1e-12 * hi) lo = std::min(lo, m);
  }
  return hi / lo;
}

inline double success_probability_formula(const std::vector<double>& scaled_eigs,
                                          const FixedPointFormat& fmt) {
  // The paper's P_succ expression, reported as a diagnostic next to the exact
  // value; it does not weight by the overlaps b_i.
  double ssum = 0;
  for (double w : scaled_eigs) {
    const QuantizedEigenvalue q = [&] {
      try {
        return quantize_eigenvalue(w, fmt);
      } catch (const OutOfRangeError&) {
        QuantizedEigenvalue z;
        z.mantissa = fmt.max_mantissa();
        z.sign = w < 0 ? -1 : 1;
        return z;
      }
    }();
    const double inv = invert_by_counting(q, fmt);
    ssum += inv * inv;
  }
  const double eps = fmt.error_bound();
  return eps * eps * ssum / static_cast<double>(scaled_eigs.size());
}

}  // namespace detail

/// Full gate-level pipeline of the comparison-based QLSS: prepare b, QPE,
/// uniform superposition on M1, multiply into M2, compare against 2^m onto the
/// flag, uncompute, inverse QPE, post-select on all work registers being zero,
/// read out B, then decode and rescale classically.
inline QLSSResult run_qlss(const ComplexMatrix& a, const RVector& b, const QLSSConfig& cfg) {
  if (cfg.m < 1) throw ConfigError("m must be >= 1");
  // The comparator's OR spans m bits and the in-circuit work budget is the two
  // Fig.-2 ancillas, which covers m <= 4. Larger m belongs to the model QLSS.
  if (cfg.m > 4) throw ConfigError("gate-level pipeline supports m <= 4; use the model QLSS");
  if (cfg.readout == ReadoutMode::Sampled && cfg.shots < 1)
    throw ConfigError("sampled read-out needs shots >= 1");

  EncodedProblem enc = encode_problem(a, b, cfg.mode, /*verify=*/false);
  const FixedPointFormat fmt(cfg.m, enc.needs_signed_format());

  int b_qubits = 0;
  while ((std::size_t{1} << b_qubits) < enc.a.rows()) ++b_qubits;
  b_qubits = std::max(b_qubits, 1);
  const RegisterLayout layout = make_qlss_layout(b_qubits, cfg.m, fmt.is_signed);
  if (layout.total_qubits() > StateVector::kMaxQubits)
    throw WidthExceededError("pipeline needs " + std::to_string(layout.total_qubits()) +
                             " qubits, cap is " + std::to_string(StateVector::kMaxQubits));

  EigenDecomposition eig = hermitian_eigendecompose(enc.a);
  if (cfg.mode == EncodingMode::HermitianPD && eig.eigenvalues.front() <= 0)
    throw NotPositiveDefiniteError("hermitian-pd mode: eigenvalue " +
                                   std::to_string(eig.eigenvalues.front()) + " <= 0");

  QLSSResult res;
  res.diagnostics.kappa = detail::kappa_of_spectrum(eig.eigenvalues);

  double s = 1.0;
  if (cfg.prescale) {
    const PrescaleResult ps = spectral_prescale(enc.a, fmt, &eig.eigenvalues);
    s = ps.s;
  }
  res.diagnostics.prescale_factor = s;
  std::vector<double> scaled_eigs = eig.eigenvalues;
  for (double& w : scaled_eigs) w *= s;

  const EigenDecomposition eig_scaled = detail::pad_eigensystem(
      EigenDecomposition{scaled_eigs, eig.eigenvectors}, std::size_t{1} << b_qubits);

  StateVector state = prepare_amplitude_state(enc.b, layout);

  const QPEFragment qpe = detail::build_qpe_from_eig(eig_scaled, fmt, layout);
  res.diagnostics.evolution_time = qpe.evolution_time;
  res.diagnostics.range_violations = qpe.range_violations;
  res.diagnostics.success_probability_formula =
      detail::success_probability_formula(scaled_eigs, fmt);
  qpe.circuit.apply_to(state);

  Circuit sign_copy, cneg;
  if (fmt.is_signed) {
    sign_copy = detail::sign_copy_fragment(layout);
    cneg = detail::conditional_negate_fragment(layout);
    sign_copy.apply_to(state);
    cneg.apply_to(state);
  }

  const std::vector<int> m1 = detail::register_indices(layout, "M1");
  const std::vector<int> clock = detail::register_indices(layout, "C");
  const std::vector<int> m2 = detail::register_indices(layout, "M2");
  const int anc_cm = layout.find("Anc_CM").lo;
  const int anc_c = layout.find("Anc_C").lo;
  const int flag = layout.find("Anc_flag").lo;

  for (int q : m1) state.apply_h(q);

  Circuit mult;
  detail::emit_multiplier(mult, m1, clock, m2, anc_cm, anc_c);
  mult.apply_to(state);

  Circuit comp;
  std::vector<int> high(m2.begin() + cfg.m, m2.end());
  detail::emit_flag_or(comp, high, flag, {anc_c, anc_cm});
  comp.apply_to(state);

  mult.inverted().apply_to(state);
  for (int q : m1) state.apply_h(q);

  if (fmt.is_signed) {
    // Undo the negation so inverse QPE sees the original clock contents; the
    // sign copy stays behind and rides to read-out.
    cneg.inverted().apply_to(state);
  }
  qpe.circuit.inverted().apply_to(state);

  const std::vector<std::pair<std::string, std::uint64_t>> constraints = {
      {"C", 0}, {"M1", 0}, {"M2", 0}, {"Anc_CM", 0}, {"Anc_C", 0}, {"Anc_flag", 0}};
  const MeasurementOutcome sel = post_select(state, layout, constraints);
  res.success_probability = sel.probability;

  // Amplitudes of register B (and the sign copy) in the selected branch.
  const int b_lo = layout.find("B").lo;
  const std::uint64_t b_dim = std::uint64_t{1} << b_qubits;
  CVector exact(enc.encoded_dim());
  if (fmt.is_signed) {
    const int s_lo = layout.find("Anc_sign").lo;
    for (std::size_t v = 0; v < exact.size(); ++v) {
      const cdouble plus = sel.post_state.amplitudes()[static_cast<std::uint64_t>(v) << b_lo];
      const cdouble minus =
          sel.post_state
              .amplitudes()[(static_cast<std::uint64_t>(v) << b_lo) | (std::uint64_t{1} << s_lo)];
      exact[v] = plus - minus;  // classical reapplication of the eigenvalue sign
    }
  } else {
    for (std::size_t v = 0; v < exact.size(); ++v)
      exact[v] = sel.post_state.amplitudes()[static_cast<std::uint64_t>(v) << b_lo];
  }

  CVector readout;
  if (cfg.readout == ReadoutMode::ExactAmplitude) {
    readout = exact;
    res.postselect_attempts = 0;
  } else {
    // Rejection sampling against the exact success probability, then Born
    // sampling of B within the selected branch. Magnitudes come from the shot
    // histogram; phases are copied from the exact reference pass (a
    // simulation-only oracle, as hardware sign recovery is out of scope).
    std::vector<double> pdf(b_dim, 0.0);
    for (std::uint64_t i = 0; i < sel.post_state.dim(); ++i)
      pdf[(i >> b_lo) & (b_dim - 1)] += std::norm(sel.post_state.amplitudes()[i]);
    std::vector<double> cdf = pdf;
    for (std::uint64_t v = 1; v < b_dim; ++v) cdf[v] += cdf[v - 1];
    SplitMix64 rng(cfg.seed);
    std::vector<std::uint64_t> counts(b_dim, 0);
    std::uint64_t attempts = 0, kept = 0;
    while (kept < cfg.shots) {
      ++attempts;
      if (attempts > cfg.shots * 1000000ULL)
        throw ZeroProbabilityError("post-selection keeps rejecting; probability too small");
      if (rng.uniform() >= res.success_probability) continue;
      const double u = rng.uniform() * cdf[b_dim - 1];
      std::uint64_t lo = 0, hi = b_dim - 1;
      while (lo < hi) {
        const std::uint64_t mid = (lo + hi) / 2;
        if (cdf[mid] > u) hi = mid; else lo = mid + 1;
      }
      ++counts[lo];
      ++kept;
    }
    res.postselect_attempts = attempts;
    readout.assign(enc.encoded_dim(), cdouble(0, 0));
    for (std::size_t v = 0; v < readout.size(); ++v) {
      const double mag = std::sqrt(static_cast<double>(counts[v]) /
                                   static_cast<double>(cfg.shots));
      cdouble phase(1, 0);
      if (std::abs(exact[v]) > 1e-14) phase = exact[v] / std::abs(exact[v]);
      readout[v] = mag * phase;
    }
  }

  CVector decoded = enc.decode(readout);
  for (cdouble& z : decoded) z *= s;  // undo the prescale on the solution
  const double nd = norm2(decoded);
  if (nd < 1e-300) throw ZeroProbabilityError("decoded solution vanished");
  for (cdouble& z : decoded) z /= nd;
  res.normalized_solution = decoded;
  res.solution = rescale_to_classical(decoded, a, CVector(b.begin(), b.end()));
  return res;
}

}  // namespace qnewton

#endif
