#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "lpdens/kernels.hpp"

namespace lpdens::kernels {

namespace {

inline void kahan_add4(__m256d v, __m256d& sum, __m256d& comp) {
  const __m256d y = _mm256_sub_pd(v, comp);
  const __m256d t = _mm256_add_pd(sum, y);
  comp = _mm256_sub_pd(_mm256_sub_pd(t, sum), y);
  sum = t;
}

inline double hsum_ordered(__m256d v) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, v);
  return ((lane[0] + lane[1]) + lane[2]) + lane[3];
}

}  // namespace

MomentSums moments2d_avx2(const double* ux, const double* uy, std::size_t n,
                          const int* e1, const int* e2, std::size_t nb,
                          int max_exp, const double* w) {
  __m256d px[64], py[64];
  __m256d sum = _mm256_setzero_pd(), sum_c = _mm256_setzero_pd();
  __m256d sq = _mm256_setzero_pd(), sq_c = _mm256_setzero_pd();
  const std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d x = _mm256_loadu_pd(ux + i);
    const __m256d y = _mm256_loadu_pd(uy + i);
    __m256d p = _mm256_set1_pd(1.0);
    __m256d q = _mm256_set1_pd(1.0);
    for (int e = 0; e <= max_exp; ++e) {
      px[e] = p;
      py[e] = q;
      p = _mm256_mul_pd(p, x);
      q = _mm256_mul_pd(q, y);
    }
    __m256d s = _mm256_setzero_pd();
    for (std::size_t k = 0; k < nb; ++k) {
      const __m256d wk = _mm256_set1_pd(w[k]);
      s = _mm256_fmadd_pd(wk, _mm256_mul_pd(px[e1[k]], py[e2[k]]), s);
    }
    kahan_add4(s, sum, sum_c);
    kahan_add4(_mm256_mul_pd(s, s), sq, sq_c);
  }
  MomentSums out{hsum_ordered(sum), hsum_ordered(sq)};
  if (n4 < n) {
    const MomentSums tail = moments2d_scalar(ux + n4, uy + n4, n - n4, e1, e2,
                                             nb, max_exp, w);
    out.sum += tail.sum;
    out.sum_sq += tail.sum_sq;
  }
  return out;
}

}  // namespace lpdens::kernels

#endif  // x86_64
