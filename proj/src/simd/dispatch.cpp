#include <cstdlib>
#include <cstring>

#include "vof/simd/kernels.hpp"

namespace vof::simd {
namespace {

struct KernelTable {
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scale)(double, double*, std::size_t);
  std::size_t (*argmax_abs)(const double*, std::size_t);
  Backend backend;
};

constexpr KernelTable kScalarTable{detail::dot_scalar, detail::axpy_scalar, detail::scale_scalar,
                                   detail::argmax_abs_scalar, Backend::Scalar};

#if defined(__x86_64__) || defined(_M_X64)
constexpr KernelTable kAvx2Table{detail::dot_avx2, detail::axpy_avx2, detail::scale_avx2,
                                 detail::argmax_abs_avx2, Backend::Avx2};
#endif
#if defined(__aarch64__)
constexpr KernelTable kNeonTable{detail::dot_neon, detail::axpy_neon, detail::scale_neon,
                                 detail::argmax_abs_neon, Backend::Neon};
#endif

bool cpu_supports(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::Neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* table_for(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return &kScalarTable;
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::Avx2:
      return &kAvx2Table;
#endif
#if defined(__aarch64__)
    case Backend::Neon:
      return &kNeonTable;
#endif
    default:
      return nullptr;
  }
}

Backend pick_default() {
  if (const char* env = std::getenv("VOF_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::Scalar;
    if (std::strcmp(env, "avx2") == 0 && cpu_supports(Backend::Avx2)) return Backend::Avx2;
    if (std::strcmp(env, "neon") == 0 && cpu_supports(Backend::Neon)) return Backend::Neon;
  }
  if (cpu_supports(Backend::Avx2)) return Backend::Avx2;
  if (cpu_supports(Backend::Neon)) return Backend::Neon;
  return Backend::Scalar;
}

const KernelTable* g_table = table_for(pick_default());

}  // namespace

Backend active_backend() { return g_table->backend; }

bool backend_available(Backend b) { return cpu_supports(b) && table_for(b) != nullptr; }

bool set_backend(Backend b) {
  if (!backend_available(b)) return false;
  g_table = table_for(b);
  return true;
}

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
    case Backend::Neon:
      return "neon";
  }
  return "unknown";
}

double dot(const double* x, const double* y, std::size_t n) { return g_table->dot(x, y, n); }

void axpy(double a, const double* x, double* y, std::size_t n) { g_table->axpy(a, x, y, n); }

void scale(double a, double* x, std::size_t n) { g_table->scale(a, x, n); }

std::size_t argmax_abs(const double* x, std::size_t n) { return g_table->argmax_abs(x, n); }

}  // namespace vof::simd
