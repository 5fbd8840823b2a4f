#pragma once

#include <Eigen/Dense>
#include <span>

#include "lpdens/domain.hpp"
#include "lpdens/multi_index.hpp"

namespace lpdens {

//! Estimator parameter: polynomial degree and bandwidth.
struct Gamma {
  int m = 0;
  double h = 0.0;
};

//! Gram system for one gamma: the matrix of inner products of the rescaled
//! monomials under w_h, its Cholesky factor, smallest eigenvalue, and the
//! solved weight vector B^-1 Phi(0).
struct GramSystem {
  Gamma gamma;
  Basis basis;
  double W_h = 0.0;
  Eigen::MatrixXd B;
  Eigen::MatrixXd chol;    // lower triangular, B = chol * chol^T
  double lambda = 0.0;     // smallest eigenvalue of B
  Eigen::VectorXd weight;  // solves B * weight = Phi(0)

  int dim() const { return basis.d; }
  std::size_t size() const { return basis.size(); }
};

//! Smallest eigenvalue of a symmetric matrix by cyclic Jacobi rotations.
//! Throws NonConvergence after 100 sweeps.
double smallest_eigenvalue(const Eigen::MatrixXd& B);

//! Builds the Gram system. Uses the exact sector and box entry formulas when
//! they apply and the quadrature engine otherwise. Accepts any h in (0, 1]
//! regardless of ctx.rho (fixed-gamma estimation is not tied to the
//! selection ladder). Throws SingularGram when the smallest eigenvalue is
//! numerically degenerate.
GramSystem build_gram(const EstimationContext& ctx, Gamma gamma,
                      const QuadratureParams& params = {});

//! weight . Phi(u) = Phi(0)^T B^-1 Phi(u), the scalar kernel weight placed on
//! an observation at offset u from t (before the w_h factor).
double kernel_weight_at(const GramSystem& sys, std::span<const double> u);

}  // namespace lpdens
