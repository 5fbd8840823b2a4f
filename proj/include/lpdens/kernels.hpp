#pragma once

#include <cstddef>

namespace lpdens::kernels {

//! First and second moments of s_i = w . phi(u_i) over a batch of scaled
//! 2-D points (u already divided by the bandwidth): sum of s_i and of s_i^2.
//! The basis is given by per-index exponent pairs (e1[k], e2[k]), k < nb,
//! with all exponents <= max_exp. Accumulation is compensated.
struct MomentSums {
  double sum = 0.0;
  double sum_sq = 0.0;
};

using MomentFn = MomentSums (*)(const double* ux, const double* uy,
                                std::size_t n, const int* e1, const int* e2,
                                std::size_t nb, int max_exp, const double* w);

//! Scalar reference kernel.
MomentSums moments2d_scalar(const double* ux, const double* uy, std::size_t n,
                            const int* e1, const int* e2, std::size_t nb,
                            int max_exp, const double* w);

//! Best kernel for this machine, chosen once at startup (AVX2+FMA when the
//! CPU has it, scalar otherwise).
MomentFn select_moments2d();

//! Name of the kernel select_moments2d returns ("avx2" or "scalar").
const char* active_kernel_name();

}  // namespace lpdens::kernels
