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

#ifndef QNEWTON_EIGEN_HPP
#define QNEWTON_EIGEN_HPP

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qnewton/complex_matrix.hpp"
#include "qnewton/common.hpp"

extern "C" {
// LAPACK divide-and-conquer symmetric eigensolver, used as the fast path for
// the large real-symmetric matrices the model QLSS produces. Column-major, but
// symmetric input makes the layout immaterial; eigenvectors come back as
// columns of the (column-major) output, i.e. rows of a row-major view.
void dsyevd_(const char* jobz, const char* uplo, const int* n, double* a, const int* lda,
             double* w, double* work, const int* lwork, int* iwork, const int* liwork,
             int* info);
}

namespace qnewton {

/// Eigenvalues sorted ascending; eigenvectors[.,i] is the unit eigenvector for
/// eigenvalues[i], stored as column i of `eigenvectors`.
struct EigenDecomposition {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;

  CVector eigenvector(std::size_t i) const {
    CVector v(eigenvectors.rows());
    for (std::size_t r = 0; r < eigenvectors.rows(); ++r) v[r] = eigenvectors(r, i);
    return v;
  }
};

namespace detail {

inline void sort_eigenpairs(std::vector<double>& w, ComplexMatrix& v) {
  const std::size_t n = w.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return w[a] < w[b]; });
  std::vector<double> w2(n);
  ComplexMatrix v2(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    w2[c] = w[order[c]];
    for (std::size_t r = 0; r < n; ++r) v2(r, c) = v(r, order[c]);
  }
  w = std::move(w2);
  v = std::move(v2);
}

inline double offdiag_frobenius(const ComplexMatrix& a) {
  double s = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace detail

inline constexpr int kJacobiSweepLimit = 100;
inline constexpr double kJacobiOffdiagTol = 1e-14;  // relative to ||A||_F

/// Hermitian eigendecomposition by cyclic Jacobi rotations. Deterministic for a
/// fixed input: sweeps run in a fixed (p, q) order until the off-diagonal
/// Frobenius mass drops below 1e-14 * ||A||_F, up to 100 sweeps.
inline EigenDecomposition hermitian_eigendecompose(const ComplexMatrix& input) {
  const std::size_t n = input.rows();
  if (input.cols() != n) throw DimensionMismatchError("eigendecompose expects square matrix");
  if (!input.is_hermitian(1e-12)) throw NonHermitianError("matrix is not Hermitian");

  ComplexMatrix a = input;
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double norm = std::max(a.frobenius_norm(), 1e-300);
  const double stop = kJacobiOffdiagTol * norm;
  // Rotations below this size cannot affect convergence to `stop`.
  const double skip = 0.1 * stop / std::max<double>(static_cast<double>(n), 1.0);

  if (n <= 1) {
    EigenDecomposition out;
    out.eigenvalues.assign(n, n == 1 ? input(0, 0).real() : 0.0);
    out.eigenvectors = v;
    return out;
  }

  int sweep = 0;
  for (; sweep < kJacobiSweepLimit; ++sweep) {
    if (detail::offdiag_frobenius(a) <= stop) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cdouble apq = a(p, q);
        const double r = std::abs(apq);
        if (r <= skip) continue;

        // Phase transform D = diag(1, w) on the (p, q) plane so the pivot
        // becomes real, then a real symmetric Givens rotation.
        const cdouble w = std::conj(apq) / r;  // a(p,q) * w = r
        if (std::abs(w - cdouble(1, 0)) > 0) {
          for (std::size_t i = 0; i < n; ++i) a(i, q) *= w;
          const cdouble wc = std::conj(w);
          for (std::size_t j = 0; j < n; ++j) a(q, j) *= wc;
          a(q, q) = cdouble(a(q, q).real(), 0.0);
          for (std::size_t i = 0; i < n; ++i) v(i, q) *= w;
        }

        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        for (std::size_t j = 0; j < n; ++j) {
          const cdouble apj = a(p, j), aqj = a(q, j);
          a(p, j) = c * apj - s * aqj;
          a(q, j) = s * apj + c * aqj;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const cdouble aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        a(p, q) = cdouble(0, 0);
        a(q, p) = cdouble(0, 0);
        a(p, p) = cdouble(a(p, p).real(), 0.0);
        a(q, q) = cdouble(a(q, q).real(), 0.0);

        for (std::size_t i = 0; i < n; ++i) {
          const cdouble vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }
  if (sweep >= kJacobiSweepLimit && detail::offdiag_frobenius(a) > stop)
    throw NoConvergenceError("Jacobi sweep limit exceeded");

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.eigenvalues[i] = a(i, i).real();
  out.eigenvectors = std::move(v);
  detail::sort_eigenpairs(out.eigenvalues, out.eigenvectors);
  return out;
}

namespace detail {

inline EigenDecomposition dsyevd_eigendecompose(const ComplexMatrix& input) {
  const int n = static_cast<int>(input.rows());
  std::vector<double> a(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a[static_cast<std::size_t>(i) * n + j] =
          0.5 * (input(static_cast<std::size_t>(i), static_cast<std::size_t>(j)).real() +
                 input(static_cast<std::size_t>(j), static_cast<std::size_t>(i)).real());
  std::vector<double> w(static_cast<std::size_t>(n));
  int lwork = 1 + 6 * n + 2 * n * n, liwork = 3 + 5 * n, info = 0;
  std::vector<double> work(static_cast<std::size_t>(lwork));
  std::vector<int> iwork(static_cast<std::size_t>(liwork));
  dsyevd_("V", "U", &n, a.data(), &n, w.data(), work.data(), &lwork, iwork.data(), &liwork,
          &info);
  if (info != 0) throw NoConvergenceError("dsyevd failed, info=" + std::to_string(info));
  EigenDecomposition out;
  out.eigenvalues.assign(w.begin(), w.end());
  out.eigenvectors = ComplexMatrix(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  // dsyevd returns eigenvector j in (column-major) column j = row j of `a`.
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      out.eigenvectors(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
          a[static_cast<std::size_t>(j) * n + i];
  return out;
}

}  // namespace detail

/// Dimension above which real-symmetric inputs are routed to LAPACK instead of
/// the Jacobi solver; at desk scale Jacobi is fine, but the model QLSS sweeps
/// over Jacobians of dimension up to 8192.
inline constexpr std::size_t kJacobiMaxDim = 128;

/// Same contract as hermitian_eigendecompose, with a size-based dispatch to
/// LAPACK (dsyevd) for large real-symmetric matrices. Complex input always
/// takes the Jacobi path.
inline EigenDecomposition hermitian_eigendecompose_fast(const ComplexMatrix& input) {
  if (input.rows() > kJacobiMaxDim &&
      input.max_imag_abs() <= 1e-14 * std::max(input.max_abs(), 1e-300)) {
    if (!input.is_hermitian(1e-12)) throw NonHermitianError("matrix is not Hermitian");
    return detail::dsyevd_eigendecompose(input);
  }
  return hermitian_eigendecompose(input);
}

/// U = V diag(e^{i lambda t}) V^dagger, exact up to the eigensolver; unitary to
/// ~1e-10 by construction.
inline ComplexMatrix matrix_exponential_unitary(const ComplexMatrix& a, double t) {
  const EigenDecomposition eig = hermitian_eigendecompose(a);
  const std::size_t n = a.rows();
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

/// kappa = max|lambda| / min|lambda| of the Hermitian dilation, i.e. the ratio
/// of extreme singular values of A.
inline double condition_number(const ComplexMatrix& a) {
  const EigenDecomposition eig = hermitian_eigendecompose_fast(dilate(a));
  double lo = 0, hi = 0;
  bool first = true;
  for (double w : eig.eigenvalues) {
    const double m = std::abs(w);
    if (first) { lo = hi = m; first = false; continue; }
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  if (lo < 1e-14 * hi) throw SingularError("condition number of a singular matrix");
  return hi / lo;
}

}  // namespace qnewton

#endif
