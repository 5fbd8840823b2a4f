#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lpdens/rng.hpp"
#include "lpdens/selection.hpp"

namespace lpdens {

//! Analytic test density: unnormalized formula plus a computed normalizing
//! constant.
struct TargetDensity {
  std::string name;
  std::function<double(std::span<const double>)> raw;  // >= 0 on the domain
  double norm_const = 0.0;  // integral of raw over the domain
  Domain domain = Domain::axis_box({0.0}, {1.0});
  double envelope = 0.0;  // sup of the normalized density (0 = not computed)

  double pdf(std::span<const double> x) const;
};

enum class TestDensityKind {
  poly_fk,   // C_k {(x-0.6)^2 + (y-0.2)^2} on the sector D_k
  gauss_gk,  // truncated two-component Gaussian mixture on D_k
  uniform,   // 1/Leb(D_k) on the sector D_k
};

//! Builds a test density on the sector D_k and computes its normalizing
//! constant by quadrature; also precomputes the rejection envelope.
TargetDensity make_test_density(TestDensityKind kind, double k,
                                const QuadratureParams& params = {});

//! n i.i.d. draws by rejection from the uniform proposal on the bounding
//! box. Deterministic given the stream. Throws EnvelopeFailure when nothing
//! is accepted among the first 1e6 proposals or past 1e9 proposals total.
Sample rejection_sample(const TargetDensity& density, std::size_t n,
                        CounterRng& rng);
Sample rejection_sample(const TargetDensity& density, std::size_t n,
                        std::uint64_t seed);

struct StudyConfig {
  TargetDensity density;
  std::vector<double> t;
  std::vector<std::size_t> sample_sizes;
  std::size_t replications = 200;
  std::vector<int> degree_grid;        // M
  std::vector<double> bandwidth_grid;  // H, subset of (0, 1]
  std::uint64_t seed = 0;
  int jobs = 1;
  QuadratureParams quad;
};

//! Paper-protocol grids: M = {0..5}, H = {0.01 + 0.001 l : l = 0..599}.
std::vector<int> default_degree_grid();
std::vector<double> default_bandwidth_grid();

struct OracleCell {
  int m = 0;
  double h = 0.0;
  double mse = 0.0;
  double se = 0.0;
  std::size_t n_fail = 0;
};

struct OracleResult {
  std::size_t n = 0;
  double f_true = 0.0;
  int m_star = 0;
  double h_star = 0.0;
  std::vector<OracleCell> table;  // m-major, h ascending within m
};

//! Replicated MSE of the fixed-(m, h) estimators over M x H at one sample
//! size; returns the argmin cell (ties to smaller m, then larger h) and the
//! full table. Cells with singular Grams are recorded as missing.
OracleResult oracle_search(const StudyConfig& cfg, std::size_t n);

struct AdaptiveRep {
  std::size_t rep = 0;
  std::size_t n = 0;
  double f_hat = 0.0;
  int m_sel = 0;
  double h_sel = 0.0;
};

//! R independent adaptive estimates at cfg.t for sample size n.
std::vector<AdaptiveRep> adaptive_replications(const StudyConfig& cfg,
                                               std::size_t n,
                                               const SelectionConfig& scfg);

//! Least-squares slope of log RMSE(adaptive) against log n over
//! cfg.sample_sizes. Requires >= 3 sizes spanning at least one decade.
double rate_check(const StudyConfig& cfg, const SelectionConfig& scfg);

}  // namespace lpdens
