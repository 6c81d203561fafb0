#pragma once

#include <cstddef>
#include <string>

namespace adagcn::kernels {

// Row-level primitives behind every dense and sparse matrix operation.
//
// Each kernel writes each output element from a fixed-order accumulation, and
// the SIMD variants use plain mul+add (no FMA), so all variants of a kernel
// produce bit-identical results on the same input. The build compiles with
// -ffp-contract=off to keep the scalar reference on the same semantics.
struct RowKernels {
  // y[i] += a * x[i]
  void (*axpy)(double* y, double a, const double* x, std::size_t n);
  // y[i] += x[i]
  void (*add)(double* y, const double* x, std::size_t n);
  // y[i] *= a
  void (*scale)(double* y, double a, std::size_t n);
  // y[i] = x[i] > 0 ? x[i] : 0
  void (*relu)(double* y, const double* x, std::size_t n);
  // y[i] = pre[i] > 0 ? y[i] : 0   (backward mask for relu)
  void (*relu_mask)(double* y, const double* pre, std::size_t n);
  // y[i] *= m[i]   (elementwise, used for dropout masks)
  void (*mul)(double* y, const double* m, std::size_t n);
  const char* name;
};

// Always-available reference implementation.
const RowKernels& scalar_kernels();

#if defined(__x86_64__) || defined(_M_X64)
bool avx2_supported();
const RowKernels& avx2_kernels();
#endif

#if defined(__aarch64__)
const RowKernels& neon_kernels();
#endif

// Variant chosen at first use: best supported ISA, overridable with
// ADAGCN_KERNEL=scalar|avx2|neon|auto.
const RowKernels& active();
std::string active_name();

inline void axpy(double* y, double a, const double* x, std::size_t n) {
  active().axpy(y, a, x, n);
}
inline void add(double* y, const double* x, std::size_t n) {
  active().add(y, x, n);
}
inline void scale(double* y, double a, std::size_t n) {
  active().scale(y, a, n);
}
inline void relu(double* y, const double* x, std::size_t n) {
  active().relu(y, x, n);
}
inline void relu_mask(double* y, const double* pre, std::size_t n) {
  active().relu_mask(y, pre, n);
}
inline void mul(double* y, const double* m, std::size_t n) {
  active().mul(y, m, n);
}

}  // namespace adagcn::kernels
