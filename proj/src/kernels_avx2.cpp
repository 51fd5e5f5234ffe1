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

#if defined(QBAYES_KERNELS_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>
#include <limits>

namespace qbayes::kernels::detail {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// ln(x) for four positive normal finite doubles.
//
// Splits x = 2^e * m with m in [sqrt2/2, sqrt2], then ln m = 2 atanh(r) with
// r = (m-1)/(m+1), |r| <= sqrt2-1 over sqrt2+1 ~ 0.1716. The odd series
// through r^19 leaves a truncation error below 1e-17 relative; ln2 is split
// hi/lo so the exponent contribution rounds once.
inline __m256d log4(__m256d x) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256i mant_mask = _mm256_set1_epi64x(0x000fffffffffffffLL);
  const __m256i one_bits = _mm256_set1_epi64x(0x3ff0000000000000LL);
  const __m256i exp_mask = _mm256_set1_epi64x(0x7ff0000000000000LL);

  __m256i bits = _mm256_castpd_si256(x);
  __m256i expi = _mm256_srli_epi64(_mm256_and_si256(bits, exp_mask), 52);
  __m256d m = _mm256_castsi256_pd(
      _mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));

  // biased exponents fit in 11 bits; gather the low dwords and convert
  __m128i lo32 = _mm_castps_si128(_mm_shuffle_ps(
      _mm_castsi128_ps(_mm256_castsi256_si128(expi)),
      _mm_castsi128_ps(_mm256_extracti128_si256(expi, 1)),
      _MM_SHUFFLE(2, 0, 2, 0)));
  __m256d e = _mm256_sub_pd(_mm256_cvtepi32_pd(lo32), _mm256_set1_pd(1023.0));

  const __m256d sqrt2 = _mm256_set1_pd(1.4142135623730951);
  __m256d gt = _mm256_cmp_pd(m, sqrt2, _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), gt);
  e = _mm256_add_pd(e, _mm256_and_pd(gt, one));

  __m256d r = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  __m256d s = _mm256_mul_pd(r, r);

  __m256d poly = _mm256_set1_pd(1.0 / 19.0);
  poly = _mm256_fmadd_pd(poly, s, _mm256_set1_pd(1.0 / 17.0));
  poly = _mm256_fmadd_pd(poly, s, _mm256_set1_pd(1.0 / 15.0));
  poly = _mm256_fmadd_pd(poly, s, _mm256_set1_pd(1.0 / 13.0));
  poly = _mm256_fmadd_pd(poly, s, _mm256_set1_pd(1.0 / 11.0));
  poly = _mm256_fmadd_pd(poly, s, _mm256_set1_pd(1.0 / 9.0));
  poly = _mm256_fmadd_pd(poly, s, _mm256_set1_pd(1.0 / 7.0));
  poly = _mm256_fmadd_pd(poly, s, _mm256_set1_pd(1.0 / 5.0));
  poly = _mm256_fmadd_pd(poly, s, _mm256_set1_pd(1.0 / 3.0));

  // ln m = 2r + 2*r*s*poly
  __m256d lnm = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_mul_pd(r, s), poly),
                                _mm256_set1_pd(2.0), _mm256_add_pd(r, r));

  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
  return _mm256_fmadd_pd(e, ln2_hi, _mm256_fmadd_pd(e, ln2_lo, lnm));
}

}  // namespace

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                           acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                           _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                           acc0);
  }
  double result = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) result += a[i] * b[i];
  return result;
}

void matvec_avx2(const double* a, const double* x, double* y, std::size_t rows,
                 std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    y[r] = dot_avx2(a + r * cols, x, cols);
  }
}

double log_dot_avx2(const double* w, const double* p, std::size_t n) {
  const __m256d dmin = _mm256_set1_pd(std::numeric_limits<double>::min());
  const __m256d dmax = _mm256_set1_pd(std::numeric_limits<double>::max());
  __m256d acc = _mm256_setzero_pd();
  double slow_acc = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d pv = _mm256_loadu_pd(p + i);
    __m256d ok = _mm256_and_pd(_mm256_cmp_pd(pv, dmin, _CMP_GE_OQ),
                               _mm256_cmp_pd(pv, dmax, _CMP_LE_OQ));
    if (_mm256_movemask_pd(ok) == 0xF) {
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), log4(pv), acc);
    } else {
      // zero, subnormal, nonfinite or nonpositive lane: defer to the
      // reference semantics for this block
      double part = log_dot_scalar(w + i, p + i, 4);
      if (std::isinf(part)) return part;
      slow_acc += part;
    }
  }
  double result = hsum(acc) + slow_acc;
  if (i < n) {
    double part = log_dot_scalar(w + i, p + i, n - i);
    if (std::isinf(part)) return part;
    result += part;
  }
  return result;
}

}  // namespace qbayes::kernels::detail

#endif  // QBAYES_KERNELS_HAVE_AVX2
