// AVX2 variants of the row kernels. Compiled with -mavx2 in this one
// translation unit; callers go through the runtime dispatch in kernels.cpp.
//
// No FMA: each lane does mul then add, matching the scalar reference
// bit-for-bit (the whole build uses -ffp-contract=off).

#include "adagcn/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace adagcn::kernels {

namespace {

void avx2_axpy(double* y, double a, const double* x, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xv = _mm256_loadu_pd(x + i);
    __m256d yv = _mm256_loadu_pd(y + i);
    yv = _mm256_add_pd(yv, _mm256_mul_pd(av, xv));
    _mm256_storeu_pd(y + i, yv);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void avx2_add(double* y, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xv = _mm256_loadu_pd(x + i);
    __m256d yv = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_add_pd(yv, xv));
  }
  for (; i < n; ++i) y[i] += x[i];
}

void avx2_scale(double* y, double a, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d yv = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_mul_pd(yv, av));
  }
  for (; i < n; ++i) y[i] *= a;
}

void avx2_relu(double* y, const double* x, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xv = _mm256_loadu_pd(x + i);
    // x > 0 ? x : +0.0, including the x == -0.0 case.
    __m256d mask = _mm256_cmp_pd(xv, zero, _CMP_GT_OQ);
    _mm256_storeu_pd(y + i, _mm256_and_pd(xv, mask));
  }
  for (; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void avx2_relu_mask(double* y, const double* pre, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d pv = _mm256_loadu_pd(pre + i);
    __m256d yv = _mm256_loadu_pd(y + i);
    __m256d mask = _mm256_cmp_pd(pv, zero, _CMP_GT_OQ);
    _mm256_storeu_pd(y + i, _mm256_and_pd(yv, mask));
  }
  for (; i < n; ++i) {
    if (!(pre[i] > 0.0)) y[i] = 0.0;
  }
}

void avx2_mul(double* y, const double* m, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d yv = _mm256_loadu_pd(y + i);
    __m256d mv = _mm256_loadu_pd(m + i);
    _mm256_storeu_pd(y + i, _mm256_mul_pd(yv, mv));
  }
  for (; i < n; ++i) y[i] *= m[i];
}

const RowKernels kAvx2 = {
    avx2_axpy, avx2_add,       avx2_scale,
    avx2_relu, avx2_relu_mask, avx2_mul,
    "avx2",
};

}  // namespace

const RowKernels& avx2_kernels() { return kAvx2; }

}  // namespace adagcn::kernels

#endif  // x86_64
