#include "lpdens/kernels.hpp"

namespace lpdens::kernels {

#if defined(__x86_64__) || defined(_M_X64)
MomentSums moments2d_avx2(const double* ux, const double* uy, std::size_t n,
                          const int* e1, const int* e2, std::size_t nb,
                          int max_exp, const double* w);
#endif

namespace {

bool have_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

}  // namespace

MomentFn select_moments2d() {
#if defined(__x86_64__) || defined(_M_X64)
  static const MomentFn fn = have_avx2() ? &moments2d_avx2 : &moments2d_scalar;
#else
  static const MomentFn fn = &moments2d_scalar;
#endif
  return fn;
}

const char* active_kernel_name() {
  return select_moments2d() == &moments2d_scalar ? "scalar" : "avx2";
}

}  // namespace lpdens::kernels
