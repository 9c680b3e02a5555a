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

#include "rangesim/cxmath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rangesim/error.hpp"

namespace rangesim::cxmath {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kJacobiTol = 1e-13;
constexpr int kJacobiMaxSweeps = 100;
constexpr double kPivotTol = 1e-12;
constexpr double kRootTol = 1e-12;
constexpr int kRootMaxIter = 200;
constexpr std::size_t kMaxGeneralSize = 4;

std::string shape(const CxMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_square(const CxMatrix& m, const char* who) {
  if (!m.is_square()) {
    throw Error(ErrorKind::dimension, std::string(who) + ": expected square matrix, got " + shape(m));
  }
}

double off_diagonal_norm(const CxMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

cx horner(std::span<const cx> c, cx z) {
  cx acc = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * z + c[k];
  return acc;
}

// Sum |c_k| |z|^k, the scale against which a residual is judged negligible.
double horner_abs(std::span<const cx> c, double r) {
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * r + std::abs(c[k]);
  return acc;
}

}  // namespace

CxMatrix::CxMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {
  if (rows == 0 || cols == 0) {
    throw Error(ErrorKind::dimension, "CxMatrix: zero-sized matrix " + shape(*this));
  }
}

CxMatrix::CxMatrix(std::size_t rows, std::size_t cols, std::vector<cx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows == 0 || cols == 0) {
    throw Error(ErrorKind::dimension, "CxMatrix: zero-sized matrix " + shape(*this));
  }
  if (data_.size() != rows * cols) {
    throw Error(ErrorKind::dimension, "CxMatrix: " + std::to_string(data_.size()) +
                                          " entries for shape " + shape(*this));
  }
}

CxMatrix CxMatrix::identity(std::size_t n) {
  CxMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CxMatrix CxMatrix::exchange(std::size_t n) {
  CxMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, n - 1 - i) = 1.0;
  return m;
}

CxMatrix CxMatrix::transpose() const {
  CxMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

CxMatrix CxMatrix::adjoint() const {
  CxMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = std::conj((*this)(i, j));
  return t;
}

CxMatrix CxMatrix::row_block(std::size_t first, std::size_t count) const {
  if (count == 0 || first + count > rows_) {
    throw Error(ErrorKind::dimension, "row_block: rows [" + std::to_string(first) + ", " +
                                          std::to_string(first + count) + ") of " + shape(*this));
  }
  std::vector<cx> e(data_.begin() + static_cast<std::ptrdiff_t>(first * cols_),
                    data_.begin() + static_cast<std::ptrdiff_t>((first + count) * cols_));
  return CxMatrix(count, cols_, std::move(e));
}

CxMatrix CxMatrix::leading_cols(std::size_t count) const {
  if (count == 0 || count > cols_) {
    throw Error(ErrorKind::dimension,
                "leading_cols: " + std::to_string(count) + " columns of " + shape(*this));
  }
  CxMatrix m(rows_, count);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < count; ++j) m(i, j) = (*this)(i, j);
  return m;
}

double CxMatrix::frobenius_norm() const noexcept {
  double s = 0.0;
  for (const cx& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

cx CxMatrix::trace() const {
  require_square(*this, "trace");
  cx t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

CxMatrix& CxMatrix::operator+=(const CxMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
    throw Error(ErrorKind::dimension, "operator+: " + shape(*this) + " vs " + shape(rhs));
  }
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

CxMatrix& CxMatrix::operator*=(double s) noexcept {
  for (cx& z : data_) z *= s;
  return *this;
}

CxMatrix operator*(const CxMatrix& a, const CxMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorKind::dimension, "operator*: " + shape(a) + " times " + shape(b));
  }
  CxMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cx aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

CxMatrix operator+(CxMatrix a, const CxMatrix& b) {
  a += b;
  return a;
}

CxMatrix operator-(const CxMatrix& a, const CxMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::dimension, "operator-: " + shape(a) + " vs " + shape(b));
  }
  CxMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

double max_abs_diff(const CxMatrix& a, const CxMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::dimension, "max_abs_diff: " + shape(a) + " vs " + shape(b));
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

CxMatrix forward_backward(const CxMatrix& r) {
  require_square(r, "forward_backward");
  const std::size_t n = r.rows();
  // (J R^T J)_{ij} = R_{n-1-j, n-1-i}
  CxMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out(i, j) = 0.5 * (r(i, j) + r(n - 1 - j, n - 1 - i));
  return out;
}

HermitianSpectrum hermitian_evd(const CxMatrix& a) {
  require_square(a, "hermitian_evd");
  const std::size_t n = a.rows();
  const double norm = a.frobenius_norm();
  if (!std::isfinite(norm)) {
    throw Error(ErrorKind::validation, "hermitian_evd: non-finite entries");
  }
  if ((a - a.adjoint()).frobenius_norm() > kHermitianTol * norm) {
    throw Error(ErrorKind::validation, "hermitian_evd: matrix is not Hermitian");
  }

  CxMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
  CxMatrix v = CxMatrix::identity(n);

  const double target = kJacobiTol * norm;
  bool converged = off_diagonal_norm(h) <= target;
  for (int sweep = 0; sweep < kJacobiMaxSweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double b = std::abs(h(p, q));
        if (b == 0.0) continue;
        const cx e = h(p, q) / b;
        const double tau = (h(q, q).real() - h(p, p).real()) / (2.0 * b);
        double t;
        if (std::abs(tau) > 1e150) {
          t = 0.5 / tau;
        } else {
          t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(tau * tau + 1.0));
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // G = diag(1, conj(e)) on (p, q) followed by a real rotation.
        const cx gpp = c;
        const cx gpq = s;
        const cx gqp = -s * std::conj(e);
        const cx gqq = c * std::conj(e);

        for (std::size_t k = 0; k < n; ++k) {
          const cx hkp = h(k, p);
          const cx hkq = h(k, q);
          h(k, p) = hkp * gpp + hkq * gqp;
          h(k, q) = hkp * gpq + hkq * gqq;
          const cx vkp = v(k, p);
          const cx vkq = v(k, q);
          v(k, p) = vkp * gpp + vkq * gqp;
          v(k, q) = vkp * gpq + vkq * gqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cx hpk = h(p, k);
          const cx hqk = h(q, k);
          h(p, k) = std::conj(gpp) * hpk + std::conj(gqp) * hqk;
          h(q, k) = std::conj(gpq) * hpk + std::conj(gqq) * hqk;
        }
        h(p, q) = 0.0;
        h(q, p) = 0.0;
        h(p, p) = h(p, p).real();
        h(q, q) = h(q, q).real();
      }
    }
    converged = off_diagonal_norm(h) <= target;
  }
  if (!converged) {
    throw Error(ErrorKind::numerical, "hermitian_evd: Jacobi sweeps did not converge");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return h(i, i).real() > h(j, j).real();
  });

  HermitianSpectrum out{std::vector<double>(n), CxMatrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.eigenvalues[j] = h(order[j], order[j]).real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, order[j]);
  }
  return out;
}

CxMatrix ls_rotation(const CxMatrix& z1, const CxMatrix& z2) {
  if (z1.rows() != z2.rows() || z1.cols() != z2.cols()) {
    throw Error(ErrorKind::dimension, "ls_rotation: " + shape(z1) + " vs " + shape(z2));
  }
  const std::size_t k = z1.cols();
  if (z1.rows() < k) {
    throw Error(ErrorKind::dimension, "ls_rotation: underdetermined system " + shape(z1));
  }
  const CxMatrix z1h = z1.adjoint();
  const CxMatrix gram = z1h * z1;
  CxMatrix rhs = z1h * z2;

  double max_diag = 0.0;
  for (std::size_t i = 0; i < k; ++i) max_diag = std::max(max_diag, gram(i, i).real());

  // Cholesky gram = L L^H.
  CxMatrix l(k, k);
  for (std::size_t j = 0; j < k; ++j) {
    double d = gram(j, j).real();
    for (std::size_t p = 0; p < j; ++p) d -= std::norm(l(j, p));
    if (!(d > kPivotTol * max_diag)) {
      throw Error(ErrorKind::numerical, "ls_rotation: normal matrix is rank deficient");
    }
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < k; ++i) {
      cx s = gram(i, j);
      for (std::size_t p = 0; p < j; ++p) s -= l(i, p) * std::conj(l(j, p));
      l(i, j) = s / ljj;
    }
  }

  const std::size_t ncol = rhs.cols();
  for (std::size_t c = 0; c < ncol; ++c) {
    for (std::size_t i = 0; i < k; ++i) {
      cx s = rhs(i, c);
      for (std::size_t p = 0; p < i; ++p) s -= l(i, p) * rhs(p, c);
      rhs(i, c) = s / l(i, i);
    }
    for (std::size_t i = k; i-- > 0;) {
      cx s = rhs(i, c);
      for (std::size_t p = i + 1; p < k; ++p) s -= std::conj(l(p, i)) * rhs(p, c);
      rhs(i, c) = s / l(i, i);
    }
  }
  return rhs;
}

std::vector<cx> characteristic_polynomial(const CxMatrix& a) {
  require_square(a, "characteristic_polynomial");
  const std::size_t n = a.rows();
  std::vector<cx> c(n + 1);
  c[n] = 1.0;
  CxMatrix m(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    m = a * m;
    for (std::size_t i = 0; i < n; ++i) m(i, i) += c[n - k + 1];
    c[n - k] = -(a * m).trace() / static_cast<double>(k);
  }
  return c;
}

std::vector<cx> polynomial_roots(std::span<const cx> c) {
  if (c.size() < 2) {
    throw Error(ErrorKind::validation, "polynomial_roots: degree must be at least 1");
  }
  const std::size_t n = c.size() - 1;
  if (c[n] != cx(1.0)) {
    throw Error(ErrorKind::validation, "polynomial_roots: polynomial must be monic");
  }
  if (n == 1) return {-c[0]};

  double radius = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    radius = std::max(radius, std::pow(std::abs(c[k]), 1.0 / static_cast<double>(n - k)));
  }
  if (radius == 0.0) return std::vector<cx>(n, 0.0);
  radius *= 2.0;

  std::vector<cx> z(n);
  const cx seed(0.4, 0.9);
  cx w = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    w *= seed;
    z[i] = radius * w / std::abs(w);
  }

  const double eps = std::numeric_limits<double>::epsilon();
  for (int iter = 0; iter < kRootMaxIter; ++iter) {
    double max_step = 0.0;
    bool residual_small = true;
    for (std::size_t i = 0; i < n; ++i) {
      const cx pz = horner(c, z[i]);
      if (std::abs(pz) > 8.0 * static_cast<double>(n) * eps * horner_abs(c, std::abs(z[i]))) {
        residual_small = false;
      }
      cx denom = 1.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) denom *= z[i] - z[j];
      if (denom == cx(0.0)) denom = eps * radius;
      const cx step = pz / denom;
      z[i] -= step;
      max_step = std::max(max_step, std::abs(step) / std::max(1.0, std::abs(z[i])));
    }
    if (max_step <= kRootTol || residual_small) return z;
  }
  throw Error(ErrorKind::numerical, "polynomial_roots: Durand-Kerner did not converge");
}

std::vector<cx> small_general_eigenvalues(const CxMatrix& a) {
  require_square(a, "small_general_eigenvalues");
  if (a.rows() > kMaxGeneralSize) {
    throw Error(ErrorKind::unsupported, "small_general_eigenvalues: size " +
                                            std::to_string(a.rows()) + " exceeds 4");
  }
  const std::vector<cx> c = characteristic_polynomial(a);
  return polynomial_roots(c);
}

}  // namespace rangesim::cxmath
