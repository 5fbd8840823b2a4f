#include "lpdens/gram.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "lpdens/errors.hpp"

namespace lpdens {

double smallest_eigenvalue(const Eigen::MatrixXd& B) {
  const auto n = B.rows();
  if (n != B.cols()) throw std::invalid_argument("smallest_eigenvalue: not square");
  const double scale = std::max(1.0, B.cwiseAbs().maxCoeff());
  if ((B - B.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("smallest_eigenvalue: matrix not symmetric");
  if (n == 1) return B(0, 0);

  Eigen::MatrixXd A = 0.5 * (B + B.transpose());
  const double frob = std::max(A.norm(), 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off2 = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off2 += 2.0 * A(p, q) * A(p, q);
    if (std::sqrt(off2) <= 1e-14 * frob) {
      return A.diagonal().minCoeff();
    }
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index r = 0; r < n; ++r) {
          const double arp = A(r, p);
          const double arq = A(r, q);
          A(r, p) = c * arp - s * arq;
          A(r, q) = s * arp + c * arq;
        }
        for (Eigen::Index r = 0; r < n; ++r) {
          const double apr = A(p, r);
          const double aqr = A(q, r);
          A(p, r) = c * apr - s * aqr;
          A(q, r) = s * apr + c * aqr;
        }
      }
    }
  }
  throw NonConvergence("smallest_eigenvalue: Jacobi did not converge in 100 sweeps");
}

namespace {

bool is_origin(std::span<const double> t) {
  for (double v : t) {
    if (v != 0.0) return false;
  }
  return true;
}

//! Exact entries for an axis-box window: products of 1-D monomial integrals
//! over the clipped, rescaled intervals.
Eigen::MatrixXd box_gram(const EstimationContext& ctx, const Basis& basis,
                         double h) {
  const int d = ctx.dimension();
  const AxisBox& bb = ctx.domain.bounding_box();
  std::vector<double> lo(d), hi(d);
  for (int j = 0; j < d; ++j) {
    lo[j] = std::max(bb.lower[j] - ctx.t[j], -h) / h;
    hi[j] = std::min(bb.upper[j] - ctx.t[j], h) / h;
  }
  // mono[j][p] = integral of xi^p over [lo_j, hi_j]
  const int pmax = 2 * basis.m;
  std::vector<std::vector<double>> mono(d, std::vector<double>(pmax + 1, 0.0));
  for (int j = 0; j < d; ++j) {
    if (hi[j] <= lo[j]) continue;
    double plo = lo[j], phi = hi[j];
    for (int p = 0; p <= pmax; ++p) {
      mono[j][p] = (phi - plo) / (p + 1);
      plo *= lo[j];
      phi *= hi[j];
    }
  }
  const auto D = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd B(D, D);
  for (Eigen::Index i = 0; i < D; ++i) {
    for (Eigen::Index j = i; j < D; ++j) {
      double v = 1.0;
      for (int a = 0; a < d; ++a) {
        const int p = basis.exps[i * d + a] + basis.exps[j * d + a];
        v *= mono[a][p];
      }
      B(i, j) = v;
      B(j, i) = v;
    }
  }
  return B;
}

Eigen::MatrixXd quadrature_gram(const EstimationContext& ctx, const Basis& basis,
                                double h, const QuadratureParams& params) {
  const auto D = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd B(D, D);
  std::vector<double> phi(basis.size());
  for (Eigen::Index i = 0; i < D; ++i) {
    for (Eigen::Index j = i; j < D; ++j) {
      const auto g = [&](std::span<const double> u) {
        eval_phi(basis, u, h, phi);
        return phi[static_cast<std::size_t>(i)] * phi[static_cast<std::size_t>(j)];
      };
      const double v = detail::integrate_window(ctx, h, g, params);
      B(i, j) = v;
      B(j, i) = v;
    }
  }
  return B;
}

}  // namespace

GramSystem build_gram(const EstimationContext& ctx, Gamma gamma,
                      const QuadratureParams& params) {
  if (!(gamma.h > 0.0) || gamma.h > 1.0)
    throw std::invalid_argument("build_gram: need 0 < h <= 1");
  if (gamma.m < 0 || gamma.m > 60)
    throw std::invalid_argument("build_gram: need 0 <= m <= 60");

  GramSystem sys;
  sys.gamma = gamma;
  sys.basis = enumerate_basis(ctx.dimension(), gamma.m);

  const bool sector_origin =
      ctx.domain.kind() == Domain::Kind::poly_sector && is_origin(ctx.t);
  if (ctx.domain.kind() == Domain::Kind::axis_box) {
    sys.B = box_gram(ctx, sys.basis, gamma.h);
  } else if (sector_origin) {
    const double k = ctx.domain.sector_exponent();
    const auto D = static_cast<Eigen::Index>(sys.basis.size());
    sys.B.resize(D, D);
    for (Eigen::Index i = 0; i < D; ++i) {
      for (Eigen::Index j = i; j < D; ++j) {
        const double v = sector_gram_entry(k, gamma.h,
                                           sys.basis.indices[static_cast<std::size_t>(i)],
                                           sys.basis.indices[static_cast<std::size_t>(j)]);
        sys.B(i, j) = v;
        sys.B(j, i) = v;
      }
    }
  } else {
    sys.B = quadrature_gram(ctx, sys.basis, gamma.h, params);
  }
  sys.W_h = sys.B(0, 0);

  sys.lambda = smallest_eigenvalue(sys.B);
  const double D = static_cast<double>(sys.basis.size());
  if (sys.lambda < 1e-12 * std::max(1.0, sys.B.trace() / D))
    throw SingularGram("build_gram: Gram matrix numerically degenerate");

  Eigen::LLT<Eigen::MatrixXd> llt(sys.B);
  if (llt.info() != Eigen::Success)
    throw SingularGram("build_gram: Cholesky factorization failed");
  sys.chol = llt.matrixL();

  std::vector<double> zero(ctx.dimension(), 0.0);
  const std::vector<double> phi0 = eval_phi(sys.basis, zero, gamma.h);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(phi0.size()));
  for (Eigen::Index i = 0; i < rhs.size(); ++i)
    rhs(i) = phi0[static_cast<std::size_t>(i)];
  sys.weight = llt.solve(rhs);
  return sys;
}

double kernel_weight_at(const GramSystem& sys, std::span<const double> u) {
  std::vector<double> phi(sys.size());
  eval_phi(sys.basis, u, sys.gamma.h, phi);
  double s = 0.0;
  for (Eigen::Index i = 0; i < sys.weight.size(); ++i)
    s += sys.weight(i) * phi[static_cast<std::size_t>(i)];
  return s;
}

}  // namespace lpdens
