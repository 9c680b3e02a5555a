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

#pragma once

#include <complex>
#include <span>

namespace rangesim::detail {

// Unnormalised in-place transforms backed by FFTW. Plans are cached per
// thread; the planner itself is serialised.
//   forward: X(k) = sum_n x(n) exp(-j 2 pi k n / N)
//   inverse: x(n) = sum_k X(k) exp(+j 2 pi k n / N)
void dft_forward(std::span<std::complex<double>> data);
void dft_inverse(std::span<std::complex<double>> data);

}  // namespace rangesim::detail
