#include "lpdens/estimator.hpp"

#include <cmath>
#include <stdexcept>

#include "lpdens/errors.hpp"
#include "lpdens/kernels.hpp"

namespace lpdens {

Sample Sample::with_dimension(int d) {
  if (d < 1) throw std::invalid_argument("Sample: d must be >= 1");
  Sample s;
  s.d = d;
  s.cols.resize(d);
  return s;
}

Sample Sample::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw std::invalid_argument("Sample: empty row list");
  Sample s = with_dimension(static_cast<int>(rows[0].size()));
  for (const auto& r : rows) s.push_back(r);
  return s;
}

void Sample::push_back(std::span<const double> p) {
  if (static_cast<int>(p.size()) != d)
    throw DimensionMismatch("Sample::push_back: dimension mismatch");
  for (int j = 0; j < d; ++j) {
    if (!std::isfinite(p[j]))
      throw std::invalid_argument("Sample: points must be finite");
    cols[j].push_back(p[j]);
  }
}

std::vector<double> Sample::row(std::size_t i) const {
  std::vector<double> p(d);
  for (int j = 0; j < d; ++j) p[j] = cols[j][i];
  return p;
}

namespace {

inline void kahan_add(double v, double& sum, double& comp) {
  const double y = v - comp;
  const double t = sum + y;
  comp = (t - sum) - y;
  sum = t;
}

}  // namespace

namespace detail {

void collect_window_2d(const EstimationContext& ctx, double h,
                       const Sample& sample, Window2D& out) {
  out.ux.clear();
  out.uy.clear();
  const std::size_t n = sample.size();
  const double tx = ctx.t[0];
  const double ty = ctx.t[1];
  const double* xs = sample.cols[0].data();
  const double* ys = sample.cols[1].data();
  double p[2];
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - tx;
    const double dy = ys[i] - ty;
    if (std::abs(dx) > h || std::abs(dy) > h) continue;
    p[0] = xs[i];
    p[1] = ys[i];
    if (!ctx.domain.contains(std::span<const double>(p, 2))) continue;
    out.ux.push_back(dx / h);
    out.uy.push_back(dy / h);
  }
}

PointEstimate estimate_from_window(const GramSystem& sys, const Window2D& win,
                                   std::size_t n) {
  PointEstimate out;
  out.gamma = sys.gamma;
  out.n_in_window = win.count();
  if (n == 0 || win.count() == 0) return out;
  std::vector<int> e1(sys.size()), e2(sys.size());
  for (std::size_t k = 0; k < sys.size(); ++k) {
    e1[k] = sys.basis.exps[k * 2];
    e2[k] = sys.basis.exps[k * 2 + 1];
  }
  const auto fn = kernels::select_moments2d();
  const kernels::MomentSums sums =
      fn(win.ux.data(), win.uy.data(), win.count(), e1.data(), e2.data(),
         sys.size(), sys.basis.m, sys.weight.data());
  const double hd_inv = std::pow(sys.gamma.h, -2);
  const double nd = static_cast<double>(n);
  out.f_hat = hd_inv * sums.sum / nd;
  out.v_hat = hd_inv * hd_inv * sums.sum_sq / (nd * nd);
  return out;
}

}  // namespace detail

PointEstimate estimate_at(const EstimationContext& ctx, const GramSystem& sys,
                          const Sample& sample) {
  if (sample.d != ctx.dimension())
    throw DimensionMismatch("estimate_at: sample dimension mismatch");
  const int d = ctx.dimension();
  const double h = sys.gamma.h;
  const std::size_t n = sample.size();

  PointEstimate out;
  out.gamma = sys.gamma;
  if (n == 0) return out;

  const double hd_inv = std::pow(h, -d);

  if (d == 2) {
    detail::Window2D win;
    detail::collect_window_2d(ctx, h, sample, win);
    return detail::estimate_from_window(sys, win, n);
  }

  // Generic scalar path for any dimension.
  std::vector<double> u(d), x(d), phi(sys.size());
  double sum = 0.0, sum_c = 0.0, sq = 0.0, sq_c = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool in_cube = true;
    for (int j = 0; j < d; ++j) {
      x[j] = sample.cols[j][i];
      u[j] = x[j] - ctx.t[j];
      if (std::abs(u[j]) > h) {
        in_cube = false;
        break;
      }
    }
    if (!in_cube || !ctx.domain.contains(x)) continue;
    ++count;
    eval_phi(sys.basis, u, h, phi);
    double s = 0.0;
    for (std::size_t k = 0; k < sys.size(); ++k) s += sys.weight(static_cast<Eigen::Index>(k)) * phi[k];
    kahan_add(s, sum, sum_c);
    kahan_add(s * s, sq, sq_c);
  }
  out.n_in_window = count;
  const double nd = static_cast<double>(n);
  out.f_hat = hd_inv * sum / nd;
  out.v_hat = hd_inv * hd_inv * sq / (nd * nd);
  return out;
}

double variance_bound_star(const GramSystem& sys, double f_sup, std::size_t n) {
  if (f_sup < 0.0) throw std::invalid_argument("variance_bound_star: f_sup < 0");
  if (n == 0) throw std::invalid_argument("variance_bound_star: n must be >= 1");
  const double D = static_cast<double>(sys.size());
  const double ratio = sys.W_h * std::sqrt(D) / sys.lambda;
  const double hd = std::pow(sys.gamma.h, sys.dim());
  return ratio * ratio * f_sup / (static_cast<double>(n) * hd * sys.W_h);
}

double population_mean(const EstimationContext& ctx, const GramSystem& sys,
                       const std::function<double(std::span<const double>)>& f,
                       const QuadratureParams& params) {
  const int d = ctx.dimension();
  std::vector<double> x(d);
  const auto g = [&](std::span<const double> u) {
    for (int j = 0; j < d; ++j) x[j] = ctx.t[j] + u[j];
    return kernel_weight_at(sys, u) * f(x);
  };
  return detail::integrate_window(ctx, sys.gamma.h, g, params);
}

double population_variance_upper(
    const EstimationContext& ctx, const GramSystem& sys,
    const std::function<double(std::span<const double>)>& f, std::size_t n,
    const QuadratureParams& params) {
  if (n == 0) throw std::invalid_argument("population_variance_upper: n >= 1");
  const int d = ctx.dimension();
  std::vector<double> x(d);
  const auto g = [&](std::span<const double> u) {
    for (int j = 0; j < d; ++j) x[j] = ctx.t[j] + u[j];
    const double kw = kernel_weight_at(sys, u);
    return kw * kw * f(x);
  };
  // {k w_h}^2 = k^2 h^-d w_h on the support of w_h.
  const double hd_inv = std::pow(sys.gamma.h, -d);
  return detail::integrate_window(ctx, sys.gamma.h, g, params) * hd_inv /
         static_cast<double>(n);
}

}  // namespace lpdens
