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

#ifndef QNEWTON_COMPLEX_MATRIX_HPP
#define QNEWTON_COMPLEX_MATRIX_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "qnewton/common.hpp"

namespace qnewton {

/// Dense complex matrix, row-major. Sized for desk-scale problems; all the
/// heavy lifting in this project happens on matrices of dimension <= a few
/// thousand.
class ComplexMatrix {
 public:
  ComplexMatrix() : rows_(0), cols_(0) {}
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, cdouble(0, 0)) {}

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cdouble& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const cdouble& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  const CVector& data() const { return a_; }
  CVector& data() { return a_; }

  ComplexMatrix adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
  }

  bool is_finite() const {
    for (const cdouble& z : a_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }

  double max_abs() const {
    double m = 0;
    for (const cdouble& z : a_) m = std::max(m, std::abs(z));
    return m;
  }

  double frobenius_norm() const {
    double s = 0;
    for (const cdouble& z : a_) s += std::norm(z);
    return std::sqrt(s);
  }

  double max_imag_abs() const {
    double m = 0;
    for (const cdouble& z : a_) m = std::max(m, std::abs(z.imag()));
    return m;
  }

  /// ||A - A^dagger||_max <= tol * ||A||_max, the hermiticity precondition used
  /// throughout.
  bool is_hermitian(double tol = 1e-12) const {
    if (rows_ != cols_) return false;
    double bound = tol * std::max(max_abs(), 1e-300);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i; j < cols_; ++j)
        if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > bound) return false;
    return true;
  }

  /// Largest row sum of absolute values; upper bound for |spec(A)| when A is
  /// Hermitian (Gershgorin).
  double gershgorin_bound() const {
    double g = 0;
    for (std::size_t i = 0; i < rows_; ++i) {
      double r = 0;
      for (std::size_t j = 0; j < cols_; ++j) r += std::abs((*this)(i, j));
      g = std::max(g, r);
    }
    return g;
  }

  ComplexMatrix operator*(const ComplexMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw DimensionMismatchError("matrix product dimensions");
    ComplexMatrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t k = 0; k < cols_; ++k) {
        const cdouble aik = (*this)(i, k);
        if (aik == cdouble(0, 0)) continue;
        const cdouble* rk = &rhs.a_[k * rhs.cols_];
        cdouble* oi = &out.a_[i * rhs.cols_];
        for (std::size_t j = 0; j < rhs.cols_; ++j) oi[j] += aik * rk[j];
      }
    }
    return out;
  }

  CVector operator*(const CVector& v) const {
    if (cols_ != v.size()) throw DimensionMismatchError("matrix-vector dimensions");
    CVector out(rows_, cdouble(0, 0));
    for (std::size_t i = 0; i < rows_; ++i) {
      cdouble s(0, 0);
      const cdouble* ri = &a_[i * cols_];
      for (std::size_t j = 0; j < cols_; ++j) s += ri[j] * v[j];
      out[i] = s;
    }
    return out;
  }

  RVector apply_real(const RVector& v) const {
    if (cols_ != v.size()) throw DimensionMismatchError("matrix-vector dimensions");
    RVector out(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      double s = 0;
      const cdouble* ri = &a_[i * cols_];
      for (std::size_t j = 0; j < cols_; ++j) s += ri[j].real() * v[j];
      out[i] = s;
    }
    return out;
  }

  ComplexMatrix scaled(cdouble factor) const {
    ComplexMatrix out = *this;
    for (cdouble& z : out.a_) z *= factor;
    return out;
  }

 private:
  std::size_t rows_, cols_;
  CVector a_;
};

/// Hermitian dilation [[0, A], [A^dagger, 0]]. The off-diagonal blocks are
/// exact conjugate transposes of each other by construction.
inline ComplexMatrix dilate(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatchError("dilate expects a square matrix");
  const std::size_t n = a.rows();
  ComplexMatrix d(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      d(i, n + j) = a(i, j);
      d(n + j, i) = std::conj(a(i, j));
    }
  }
  return d;
}

/// LU solve with partial pivoting. Throws SingularError when a pivot collapses
/// below 1e-14 of the largest pivot seen.
inline CVector lu_solve(ComplexMatrix a, CVector b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw DimensionMismatchError("lu_solve dimensions");
  std::vector<std::size_t> piv(n);
  double pivot_max = 0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t p = col;
    double best = std::abs(a(col, col));
    for (std::size_t i = col + 1; i < n; ++i) {
      double v = std::abs(a(i, col));
      if (v > best) { best = v; p = i; }
    }
    pivot_max = std::max(pivot_max, best);
    if (best < 1e-14 * std::max(pivot_max, 1.0))
      throw SingularError("pivot collapse at column " + std::to_string(col));
    piv[col] = p;
    if (p != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(p, j));
      std::swap(b[col], b[p]);
    }
    const cdouble d = a(col, col);
    for (std::size_t i = col + 1; i < n; ++i) {
      const cdouble f = a(i, col) / d;
      if (f == cdouble(0, 0)) continue;
      a(i, col) = f;
      for (std::size_t j = col + 1; j < n; ++j) a(i, j) -= f * a(col, j);
      b[i] -= f * b[col];
    }
  }
  CVector x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    cdouble s = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= a(ii, j) * x[j];
    x[ii] = s / a(ii, ii);
  }
  return x;
}

inline RVector lu_solve_real(const ComplexMatrix& a, const RVector& b) {
  CVector bc(b.begin(), b.end());
  CVector x = lu_solve(a, std::move(bc));
  RVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i].real();
  return out;
}

}  // namespace qnewton

#endif
