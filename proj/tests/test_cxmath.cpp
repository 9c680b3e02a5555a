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

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "rangesim/cxmath.hpp"
#include "rangesim/error.hpp"
#include "test_helpers.hpp"

using namespace rangesim::cxmath;
using rangesim::Error;
using rangesim::ErrorKind;
using testing::cx;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected rangesim::Error");
  return ErrorKind::io;
}

bool persymmetric_exact(const CxMatrix& r) {
  const std::size_t n = r.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (r(i, j) != r(n - 1 - j, n - 1 - i)) return false;
  return true;
}

}  // namespace

TEST_CASE("CxMatrix rejects empty shapes and mismatched entries") {
  CHECK(kind_of([] { CxMatrix(0, 3); }) == ErrorKind::dimension);
  CHECK(kind_of([] { CxMatrix(2, 2, std::vector<cx>(3)); }) == ErrorKind::dimension);
  CHECK(kind_of([] { (void)(CxMatrix(2, 3) * CxMatrix(2, 3)); }) == ErrorKind::dimension);
}

TEST_CASE("forward_backward examples") {
  CHECK(max_abs_diff(forward_backward(CxMatrix::identity(3)), CxMatrix::identity(3)) == 0.0);

  CxMatrix d(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  const CxMatrix fb = forward_backward(d);
  CHECK(fb(0, 0) == cx(1.5));
  CHECK(fb(1, 1) == cx(1.5));
  CHECK(fb(0, 1) == cx(0.0));

  CHECK(kind_of([] { forward_backward(CxMatrix(2, 3)); }) == ErrorKind::dimension);
}

TEST_CASE("forward_backward matches the explicit J R^T J construction") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const CxMatrix r = testing::random_hermitian(4, rng);
    const CxMatrix j = CxMatrix::exchange(4);
    CxMatrix ref = r + j * r.transpose() * j;
    ref *= 0.5;
    const CxMatrix fb = forward_backward(r);
    CHECK(max_abs_diff(fb, ref) <= 1e-15);
    CHECK(persymmetric_exact(fb));
    CHECK(max_abs_diff(fb, fb.adjoint()) <= 1e-15);
    CHECK(max_abs_diff(forward_backward(fb), fb) <= 1e-15);
  }
}

TEST_CASE("hermitian_evd small examples") {
  CxMatrix d(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  const HermitianSpectrum s = hermitian_evd(d);
  CHECK(s.eigenvalues[0] == doctest::Approx(3.0));
  CHECK(s.eigenvalues[1] == doctest::Approx(1.0));
  CHECK(std::abs(s.eigenvectors(0, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(s.eigenvectors(1, 1)) == doctest::Approx(1.0));

  // characteristic polynomial l^2 - 4l + 3
  const CxMatrix a(2, 2, {2.0, cx(0, 1), cx(0, -1), 2.0});
  const HermitianSpectrum t = hermitian_evd(a);
  CHECK(t.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(t.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));

  const CxMatrix z(3, 3);
  const HermitianSpectrum zs = hermitian_evd(z);
  CHECK(std::all_of(zs.eigenvalues.begin(), zs.eigenvalues.end(), [](double v) { return v == 0.0; }));
}

TEST_CASE("hermitian_evd ties keep first-encountered order") {
  const HermitianSpectrum s = hermitian_evd(CxMatrix::identity(3));
  CHECK(max_abs_diff(s.eigenvectors, CxMatrix::identity(3)) == 0.0);
}

TEST_CASE("hermitian_evd rejects non-Hermitian input") {
  const CxMatrix a(2, 2, {1.0, 2.0, 3.0, 1.0});
  CHECK(kind_of([&] { hermitian_evd(a); }) == ErrorKind::validation);
  CHECK(kind_of([] { hermitian_evd(CxMatrix(2, 3)); }) == ErrorKind::dimension);
}

TEST_CASE("hermitian_evd reconstruction on random Gram matrices") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t % 5);
    const CxMatrix b = testing::random_matrix(n, n, rng);
    const CxMatrix a = b.adjoint() * b;
    const HermitianSpectrum s = hermitian_evd(a);
    CHECK(std::is_sorted(s.eigenvalues.rbegin(), s.eigenvalues.rend()));
    CHECK(s.eigenvalues.back() >= -1e-12);
    CxMatrix lambda(n, n);
    for (std::size_t i = 0; i < n; ++i) lambda(i, i) = s.eigenvalues[i];
    const CxMatrix& v = s.eigenvectors;
    CHECK(max_abs_diff(v * lambda * v.adjoint(), a) <= 1e-10 * a.frobenius_norm());
    CHECK(max_abs_diff(v.adjoint() * v, CxMatrix::identity(n)) <= 1e-10);
  }
}

TEST_CASE("ls_rotation examples") {
  std::mt19937_64 rng(5);
  const CxMatrix z = testing::random_matrix(3, 2, rng);
  CHECK(max_abs_diff(ls_rotation(z, z), CxMatrix::identity(2)) <= 1e-12);

  const double xi = 0.137;
  const auto e = testing::exponential(xi, 4);
  const CxMatrix z1(3, 1, {e[0], e[1], e[2]});
  const CxMatrix z2(3, 1, {e[1], e[2], e[3]});
  const CxMatrix phi = ls_rotation(z1, z2);
  CHECK(std::abs(phi(0, 0) - std::exp(cx(0, 2 * std::numbers::pi * xi))) <= 1e-14);

  for (int t = 0; t < 20; ++t) {
    const CxMatrix a = testing::random_matrix(3, 2, rng);
    const CxMatrix g = testing::random_matrix(2, 2, rng);
    CHECK(max_abs_diff(ls_rotation(a, a * g), g) <= 1e-10);
  }
}

TEST_CASE("ls_rotation error paths") {
  CxMatrix rank1(3, 2);
  for (std::size_t i = 0; i < 3; ++i) rank1(i, 0) = rank1(i, 1) = static_cast<double>(i + 1);
  CHECK(kind_of([&] { ls_rotation(rank1, rank1); }) == ErrorKind::numerical);
  CHECK(kind_of([] { ls_rotation(CxMatrix(3, 2), CxMatrix(3, 1)); }) == ErrorKind::dimension);
  CHECK(kind_of([] { ls_rotation(CxMatrix(1, 2), CxMatrix(1, 2)); }) == ErrorKind::dimension);
}

TEST_CASE("small_general_eigenvalues examples") {
  const cx c(0.3, -1.7);
  const auto one = small_general_eigenvalues(CxMatrix(1, 1, {c}));
  REQUIRE(one.size() == 1);
  CHECK(std::abs(one[0] - c) <= 1e-15);

  const cx a = std::polar(1.0, std::numbers::pi / 4);
  const cx b = std::polar(1.0, -std::numbers::pi / 3);
  auto two = small_general_eigenvalues(CxMatrix(2, 2, {a, 0.0, 0.0, b}));
  REQUIRE(two.size() == 2);
  if (std::abs(two[0] - a) > std::abs(two[0] - b)) std::swap(two[0], two[1]);
  CHECK(std::abs(two[0] - a) <= 1e-12);
  CHECK(std::abs(two[1] - b) <= 1e-12);

  CHECK(kind_of([] { small_general_eigenvalues(CxMatrix(5, 5)); }) == ErrorKind::unsupported);
}

TEST_CASE("small_general_eigenvalues handles repeated roots") {
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto ev = small_general_eigenvalues(CxMatrix::identity(n));
    REQUIRE(ev.size() == n);
    // a root of multiplicity n is ill-conditioned; iteration stops on the residual
    const double tol = n == 1 ? 1e-14 : 1e-3;
    cx sum = 0.0;
    for (const cx& z : ev) {
      CHECK(std::abs(z - 1.0) <= tol);
      sum += z;
    }
    CHECK(std::abs(sum - static_cast<double>(n)) <= tol);
  }
  const auto zero = small_general_eigenvalues(CxMatrix(3, 3));
  for (const cx& z : zero) CHECK(std::abs(z) == 0.0);
}

TEST_CASE("small_general_eigenvalues symmetric-function identities") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t % 4);
    const CxMatrix a = testing::random_matrix(n, n, rng);
    const auto ev = small_general_eigenvalues(a);
    REQUIRE(ev.size() == n);
    cx sum = 0.0;
    cx prod = 1.0;
    cx e2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += ev[i];
      prod *= ev[i];
      for (std::size_t j = i + 1; j < n; ++j) e2 += ev[i] * ev[j];
    }
    const cx tr = a.trace();
    const cx tr2 = (a * a).trace();
    const cx det = testing::det_cofactor(a);
    const double scale = std::max(1.0, a.frobenius_norm());
    CHECK(std::abs(sum - tr) <= 1e-8 * scale);
    CHECK(std::abs(e2 - 0.5 * (tr * tr - tr2)) <= 1e-8 * scale * scale);
    CHECK(std::abs(prod - det) <= 1e-8 * std::pow(scale, static_cast<double>(n)));
  }
}

TEST_CASE("small_general_eigenvalues agrees with hermitian_evd on Hermitian input") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t % 4);
    const CxMatrix a = testing::random_hermitian(n, rng);
    auto ev = small_general_eigenvalues(a);
    std::sort(ev.begin(), ev.end(), [](cx x, cx y) { return x.real() > y.real(); });
    const HermitianSpectrum s = hermitian_evd(a);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(ev[i] - s.eigenvalues[i]) <= 1e-8);
    }
  }
}
