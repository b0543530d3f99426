#include "mermin/simd/kernels.hpp"

#if defined(MERMIN_HAVE_AVX2)

#include <immintrin.h>

#define MERMIN_AVX2_TARGET __attribute__((target("avx2,fma")))

namespace mermin::simd::avx2 {

namespace {

// (ar + i ai) * [br0, bi0, br1, bi1] for two packed complex values.
MERMIN_AVX2_TARGET inline __m256d cmul_broadcast(__m256d ar, __m256d ai, __m256d b) {
  const __m256d bswap = _mm256_permute_pd(b, 0b0101);
  return _mm256_fmaddsub_pd(ar, b, _mm256_mul_pd(ai, bswap));
}

}  // namespace

MERMIN_AVX2_TARGET double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  acc0 = _mm256_add_pd(acc0, acc1);
  const __m128d lo = _mm256_castpd256_pd128(acc0);
  const __m128d hi = _mm256_extractf128_pd(acc0, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  double acc = _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

MERMIN_AVX2_TARGET void cgemm(const cplx* a, const cplx* b, cplx* out, std::size_t m,
                              std::size_t k, std::size_t n) {
  const auto* bd = reinterpret_cast<const double*>(b);
  auto* od = reinterpret_cast<double*>(out);
  const std::size_t paired = n & ~std::size_t{1};
  for (std::size_t i = 0; i < m; ++i) {
    double* orow = od + 2 * i * n;
    std::size_t j = 0;
    for (; j < paired; j += 2) {
      __m256d acc = _mm256_setzero_pd();
      for (std::size_t p = 0; p < k; ++p) {
        const cplx aip = a[i * k + p];
        const __m256d bv = _mm256_loadu_pd(bd + 2 * (p * n + j));
        acc = _mm256_add_pd(acc, cmul_broadcast(_mm256_set1_pd(aip.real()),
                                                _mm256_set1_pd(aip.imag()), bv));
      }
      _mm256_storeu_pd(orow + 2 * j, acc);
    }
    for (; j < n; ++j) {
      cplx acc{};
      for (std::size_t p = 0; p < k; ++p) acc += a[i * k + p] * b[p * n + j];
      out[i * n + j] = acc;
    }
  }
}

MERMIN_AVX2_TARGET void caxpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  const auto* xd = reinterpret_cast<const double*>(x);
  auto* yd = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, cmul_broadcast(ar, ai, xv)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace mermin::simd::avx2

#endif  // MERMIN_HAVE_AVX2
