#pragma once

// Dense double-precision kernels used by the LP solver and the forecasting
// model. Every kernel has a scalar reference implementation and, where the
// hardware supports it, a vectorized variant (AVX2+FMA on x86-64, NEON on
// aarch64). The backend is picked once at startup from CPUID / the
// VOF_SIMD environment variable; all variants are equivalence-tested
// against the scalar reference.

#include <cstddef>

namespace vof::simd {

enum class Backend { Scalar, Avx2, Neon };

// Backend currently routing the kernels.
Backend active_backend();

// True if the running CPU can execute the given backend.
bool backend_available(Backend b);

// Force a backend (tests, troubleshooting). Returns false and leaves the
// routing unchanged if the backend is unavailable on this CPU.
bool set_backend(Backend b);

const char* backend_name(Backend b);

// sum_i x[i] * y[i]
double dot(const double* x, const double* y, std::size_t n);

// y[i] += a * x[i]
void axpy(double a, const double* x, double* y, std::size_t n);

// x[i] *= a
void scale(double a, double* x, std::size_t n);

// index of the entry with the largest magnitude; first such index on ties.
// n must be >= 1.
std::size_t argmax_abs(const double* x, std::size_t n);

namespace detail {
// Reference implementations, exposed so tests can compare any routed
// backend against them directly.
double dot_scalar(const double* x, const double* y, std::size_t n);
void axpy_scalar(double a, const double* x, double* y, std::size_t n);
void scale_scalar(double a, double* x, std::size_t n);
std::size_t argmax_abs_scalar(const double* x, std::size_t n);

#if defined(__x86_64__) || defined(_M_X64)
double dot_avx2(const double* x, const double* y, std::size_t n);
void axpy_avx2(double a, const double* x, double* y, std::size_t n);
void scale_avx2(double a, double* x, std::size_t n);
std::size_t argmax_abs_avx2(const double* x, std::size_t n);
#endif

#if defined(__aarch64__)
double dot_neon(const double* x, const double* y, std::size_t n);
void axpy_neon(double a, const double* x, double* y, std::size_t n);
void scale_neon(double a, double* x, std::size_t n);
std::size_t argmax_abs_neon(const double* x, std::size_t n);
#endif
}  // namespace detail

}  // namespace vof::simd
