// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The rangesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Small dense complex linear algebra. Everything here targets matrices of
// dimension <= 64 (typically 4x4) evaluated millions of times in Monte Carlo
// loops, so the implementations favour simplicity over asymptotic speed.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace rangesim::cxmath {

using cx = std::complex<double>;

/// Row-major dense complex matrix with at least one row and one column.
class CxMatrix {
public:
  CxMatrix(std::size_t rows, std::size_t cols);
  CxMatrix(std::size_t rows, std::size_t cols, std::vector<cx> entries);

  static CxMatrix identity(std::size_t n);
  static CxMatrix exchange(std::size_t n);  // ones on the anti-diagonal

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  cx& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  const cx& operator()(std::size_t r, std::size_t c) const noexcept {
    return data_[r * cols_ + c];
  }

  std::span<const cx> entries() const noexcept { return data_; }

  CxMatrix transpose() const;
  CxMatrix adjoint() const;
  /// Rows [first, first + count), all columns.
  CxMatrix row_block(std::size_t first, std::size_t count) const;
  /// Columns [0, count), all rows.
  CxMatrix leading_cols(std::size_t count) const;

  double frobenius_norm() const noexcept;
  cx trace() const;

  CxMatrix& operator+=(const CxMatrix& rhs);
  CxMatrix& operator*=(double s) noexcept;

private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<cx> data_;
};

CxMatrix operator*(const CxMatrix& a, const CxMatrix& b);
CxMatrix operator+(CxMatrix a, const CxMatrix& b);
CxMatrix operator-(const CxMatrix& a, const CxMatrix& b);

/// Largest entrywise modulus of a - b.
double max_abs_diff(const CxMatrix& a, const CxMatrix& b);

/// Eigenvalues in non-increasing order, eigenvectors as matching columns.
struct HermitianSpectrum {
  std::vector<double> eigenvalues;
  CxMatrix eigenvectors;
};

/// (R + J R^T J) / 2, the forward-backward average of a square matrix.
CxMatrix forward_backward(const CxMatrix& r);

/// Cyclic Jacobi eigendecomposition. Throws validation if `a` is not Hermitian
/// to 1e-12 relative, numerical if 100 sweeps do not converge.
HermitianSpectrum hermitian_evd(const CxMatrix& a);

/// Least-squares X minimising ||z1 X - z2||_F via the normal equations.
/// Throws numerical when z1^H z1 is singular to working precision.
CxMatrix ls_rotation(const CxMatrix& z1, const CxMatrix& z2);

/// All eigenvalues of a general 1x1 .. 4x4 complex matrix, unordered.
std::vector<cx> small_general_eigenvalues(const CxMatrix& a);

/// Monic characteristic polynomial coefficients, lowest degree first
/// (c[0] + c[1] x + ... + x^n), by Faddeev-LeVerrier.
std::vector<cx> characteristic_polynomial(const CxMatrix& a);

/// Durand-Kerner roots of a monic polynomial given lowest degree first.
std::vector<cx> polynomial_roots(std::span<const cx> monic_coeffs);

}  // namespace rangesim::cxmath
