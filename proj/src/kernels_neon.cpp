// NEON variants of the row kernels for aarch64. Same contract as the AVX2
// translation unit: mul+add per lane, no fused ops, bit-identical to scalar.

#include "adagcn/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace adagcn::kernels {

namespace {

void neon_axpy(double* y, double a, const double* x, std::size_t n) {
  const float64x2_t av = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t xv = vld1q_f64(x + i);
    float64x2_t yv = vld1q_f64(y + i);
    yv = vaddq_f64(yv, vmulq_f64(av, xv));
    vst1q_f64(y + i, yv);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void neon_add(double* y, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vld1q_f64(x + i)));
  }
  for (; i < n; ++i) y[i] += x[i];
}

void neon_scale(double* y, double a, std::size_t n) {
  const float64x2_t av = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vmulq_f64(vld1q_f64(y + i), av));
  }
  for (; i < n; ++i) y[i] *= a;
}

void neon_relu(double* y, const double* x, std::size_t n) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t xv = vld1q_f64(x + i);
    uint64x2_t mask = vcgtq_f64(xv, zero);
    vst1q_f64(y + i, vreinterpretq_f64_u64(
                         vandq_u64(vreinterpretq_u64_f64(xv), mask)));
  }
  for (; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void neon_relu_mask(double* y, const double* pre, std::size_t n) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t pv = vld1q_f64(pre + i);
    float64x2_t yv = vld1q_f64(y + i);
    uint64x2_t mask = vcgtq_f64(pv, zero);
    vst1q_f64(y + i, vreinterpretq_f64_u64(
                         vandq_u64(vreinterpretq_u64_f64(yv), mask)));
  }
  for (; i < n; ++i) {
    if (!(pre[i] > 0.0)) y[i] = 0.0;
  }
}

void neon_mul(double* y, const double* m, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vmulq_f64(vld1q_f64(y + i), vld1q_f64(m + i)));
  }
  for (; i < n; ++i) y[i] *= m[i];
}

const RowKernels kNeon = {
    neon_axpy, neon_add,       neon_scale,
    neon_relu, neon_relu_mask, neon_mul,
    "neon",
};

}  // namespace

const RowKernels& neon_kernels() { return kNeon; }

}  // namespace adagcn::kernels

#endif  // aarch64
