// Copyright 2026 the qbayes authors
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

#pragma once

#include <cstddef>
#include <string_view>

namespace qbayes::kernels {

// The arithmetic inner loops of the sampler: a dense real matvec (POVM
// outcome probabilities from the Hermitian-vector embedding of rho) and a
// weighted-log reduction (the log-likelihood). Scalar reference kernels are
// the semantic ground truth; the AVX2 variants are selected at runtime and
// equivalence-tested against them.

enum class Backend { scalar, avx2 };

/// Best backend this build + CPU supports.
Backend best_backend();

/// Backend used by the public kernel entry points. Defaults to best_backend().
Backend active_backend();

/// Force a backend (tests, benchmarking). Throws argument_error if the
/// requested backend is not available on this machine.
void set_backend(Backend b);

std::string_view backend_name(Backend b);

/// y = A * x with A row-major, shape (rows x cols).
void matvec(const double* a, const double* x, double* y, std::size_t rows,
            std::size_t cols);

double dot(const double* a, const double* b, std::size_t n);

/// sum of w[i] * log(p[i]) over entries with w[i] != 0.
/// Returns -infinity when some w[i] != 0 pairs with p[i] <= 0.
double log_dot(const double* w, const double* p, std::size_t n);

namespace detail {

void matvec_scalar(const double* a, const double* x, double* y,
                   std::size_t rows, std::size_t cols);
double dot_scalar(const double* a, const double* b, std::size_t n);
double log_dot_scalar(const double* w, const double* p, std::size_t n);

#if defined(QBAYES_KERNELS_HAVE_AVX2)
void matvec_avx2(const double* a, const double* x, double* y, std::size_t rows,
                 std::size_t cols);
double dot_avx2(const double* a, const double* b, std::size_t n);
double log_dot_avx2(const double* w, const double* p, std::size_t n);
#endif

}  // namespace detail

}  // namespace qbayes::kernels
