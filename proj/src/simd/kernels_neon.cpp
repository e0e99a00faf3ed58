// NEON kernel variants for aarch64. NEON is baseline on aarch64, so no
// runtime CPU check is needed beyond the architecture itself.

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>

#include "vof/simd/kernels.hpp"

namespace vof::simd::detail {

double dot_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scale_neon(double a, double* x, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) x[i] *= a;
}

std::size_t argmax_abs_neon(const double* x, std::size_t n) {
  float64x2_t vmax = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vmax = vmaxq_f64(vmax, vabsq_f64(vld1q_f64(x + i)));
  }
  double best = vmaxvq_f64(vmax);
  for (; i < n; ++i) {
    const double a = std::fabs(x[i]);
    if (a > best) best = a;
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (std::fabs(x[j]) == best) return j;
  }
  return 0;
}

}  // namespace vof::simd::detail

#endif  // aarch64
