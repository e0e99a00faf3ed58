#include "vof/simd/kernels.hpp"

#include <cmath>

namespace vof::simd::detail {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  // Four-way unrolled to match the associativity of the vector variants as
  // closely as a scalar loop can; remainder handled at the end.
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += x[i] * y[i];
    s1 += x[i + 1] * y[i + 1];
    s2 += x[i + 2] * y[i + 2];
    s3 += x[i + 3] * y[i + 3];
  }
  double s = (s0 + s1) + (s2 + s3);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_scalar(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

std::size_t argmax_abs_scalar(const double* x, std::size_t n) {
  std::size_t best = 0;
  double best_abs = std::fabs(x[0]);
  for (std::size_t i = 1; i < n; ++i) {
    const double a = std::fabs(x[i]);
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  return best;
}

}  // namespace vof::simd::detail
