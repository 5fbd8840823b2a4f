#pragma once

#include <functional>
#include <span>
#include <vector>

#include "lpdens/domain.hpp"
#include "lpdens/gram.hpp"

namespace lpdens {

//! Observation matrix stored column-major (one contiguous array per
//! coordinate), which is what the accumulation kernels want.
struct Sample {
  int d = 0;
  std::vector<std::vector<double>> cols;

  std::size_t size() const { return d == 0 ? 0 : cols[0].size(); }

  static Sample with_dimension(int d);
  static Sample from_rows(const std::vector<std::vector<double>>& rows);
  void push_back(std::span<const double> p);
  std::vector<double> row(std::size_t i) const;
};

struct PointEstimate {
  Gamma gamma;
  double f_hat = 0.0;
  double v_hat = 0.0;
  std::size_t n_in_window = 0;  // observations with w_h(X_i - t) > 0
};

//! Local polynomial estimate at ctx.t: f_hat = (1/n) sum_i k_i and
//! v_hat = (1/n^2) sum_i k_i^2 with k_i the kernel weight of observation i.
//! Single pass; an empty window yields (0, 0).
PointEstimate estimate_at(const EstimationContext& ctx, const GramSystem& sys,
                          const Sample& sample);

//! Analytic variance bound (W_h sqrt(D_m) / lambda)^2 * f_sup / (n h^d W_h).
double variance_bound_star(const GramSystem& sys, double f_sup, std::size_t n);

//! E f_hat by quadrature: integral of kernel_weight(u) w_h(u) f(t+u) du.
double population_mean(const EstimationContext& ctx, const GramSystem& sys,
                       const std::function<double(std::span<const double>)>& f,
                       const QuadratureParams& params = {});

//! Population counterpart of v_hat:
//! (1/n) integral of {kernel_weight(u) w_h(u)}^2 f(t+u) du.
double population_variance_upper(
    const EstimationContext& ctx, const GramSystem& sys,
    const std::function<double(std::span<const double>)>& f, std::size_t n,
    const QuadratureParams& params = {});

namespace detail {

//! Scaled offsets (X_i - t)/h of the observations with w_h(X_i - t) > 0.
struct Window2D {
  std::vector<double> ux;
  std::vector<double> uy;
  std::size_t count() const { return ux.size(); }
};

void collect_window_2d(const EstimationContext& ctx, double h,
                       const Sample& sample, Window2D& out);

//! Estimate from a pre-collected window (d = 2); win must come from
//! collect_window_2d at the same bandwidth as sys.
PointEstimate estimate_from_window(const GramSystem& sys, const Window2D& win,
                                   std::size_t n);

}  // namespace detail

}  // namespace lpdens
