#include "lpdens/kernels.hpp"

namespace lpdens::kernels {

namespace {

inline void kahan_add(double v, double& sum, double& comp) {
  const double y = v - comp;
  const double t = sum + y;
  comp = (t - sum) - y;
  sum = t;
}

}  // namespace

MomentSums moments2d_scalar(const double* ux, const double* uy, std::size_t n,
                            const int* e1, const int* e2, std::size_t nb,
                            int max_exp, const double* w) {
  double px[64], py[64];
  double sum = 0.0, sum_c = 0.0;
  double sq = 0.0, sq_c = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = ux[i];
    const double y = uy[i];
    double p = 1.0, q = 1.0;
    for (int e = 0; e <= max_exp; ++e) {
      px[e] = p;
      py[e] = q;
      p *= x;
      q *= y;
    }
    double s = 0.0;
    for (std::size_t k = 0; k < nb; ++k) {
      s += w[k] * px[e1[k]] * py[e2[k]];
    }
    kahan_add(s, sum, sum_c);
    kahan_add(s * s, sq, sq_c);
  }
  return MomentSums{sum, sq};
}

}  // namespace lpdens::kernels
