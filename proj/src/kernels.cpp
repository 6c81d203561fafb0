#include "adagcn/kernels.hpp"

#include <cstdlib>
#include <mutex>

namespace adagcn::kernels {

namespace {

void scalar_axpy(double* y, double a, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scalar_add(double* y, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += x[i];
}

void scalar_scale(double* y, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] *= a;
}

void scalar_relu(double* y, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void scalar_relu_mask(double* y, const double* pre, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (!(pre[i] > 0.0)) y[i] = 0.0;
  }
}

void scalar_mul(double* y, const double* m, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] *= m[i];
}

const RowKernels kScalar = {
    scalar_axpy, scalar_add,       scalar_scale,
    scalar_relu, scalar_relu_mask, scalar_mul,
    "scalar",
};

const RowKernels* pick_active() {
  const char* req = std::getenv("ADAGCN_KERNEL");
  std::string want = req ? req : "auto";
  if (want == "scalar") return &kScalar;
#if defined(__x86_64__) || defined(_M_X64)
  if (want == "avx2") return avx2_supported() ? &avx2_kernels() : &kScalar;
  if (want == "auto" && avx2_supported()) return &avx2_kernels();
#endif
#if defined(__aarch64__)
  if (want == "neon" || want == "auto") return &neon_kernels();
#endif
  return &kScalar;
}

}  // namespace

const RowKernels& scalar_kernels() { return kScalar; }

#if defined(__x86_64__) || defined(_M_X64)
bool avx2_supported() { return __builtin_cpu_supports("avx2") != 0; }
#endif

const RowKernels& active() {
  static const RowKernels* chosen = pick_active();
  return *chosen;
}

std::string active_name() { return active().name; }

}  // namespace adagcn::kernels
