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

#include "qbayes/kernels.hpp"

#include <atomic>

#include "qbayes/errors.hpp"

namespace qbayes::kernels {

namespace {

std::atomic<Backend>& backend_slot() {
  static std::atomic<Backend> slot{best_backend()};
  return slot;
}

}  // namespace

Backend best_backend() {
#if defined(QBAYES_KERNELS_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return Backend::avx2;
  }
#endif
  return Backend::scalar;
}

Backend active_backend() { return backend_slot().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (b == Backend::avx2 && best_backend() != Backend::avx2) {
    throw argument_error("kernels: avx2 backend not available on this machine");
  }
  backend_slot().store(b, std::memory_order_relaxed);
}

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
  }
  return "unknown";
}

void matvec(const double* a, const double* x, double* y, std::size_t rows,
            std::size_t cols) {
#if defined(QBAYES_KERNELS_HAVE_AVX2)
  if (active_backend() == Backend::avx2) {
    detail::matvec_avx2(a, x, y, rows, cols);
    return;
  }
#endif
  detail::matvec_scalar(a, x, y, rows, cols);
}

double dot(const double* a, const double* b, std::size_t n) {
#if defined(QBAYES_KERNELS_HAVE_AVX2)
  if (active_backend() == Backend::avx2) return detail::dot_avx2(a, b, n);
#endif
  return detail::dot_scalar(a, b, n);
}

double log_dot(const double* w, const double* p, std::size_t n) {
#if defined(QBAYES_KERNELS_HAVE_AVX2)
  if (active_backend() == Backend::avx2) return detail::log_dot_avx2(w, p, n);
#endif
  return detail::log_dot_scalar(w, p, n);
}

}  // namespace qbayes::kernels
