#pragma once

#include <string>
#include <vector>

#include "lpdens/estimator.hpp"

namespace lpdens {

//! Rule for the degree sequence m_ell of the bandwidth ladder.
enum class MRule {
  simple_domain,  // m_ell = floor(log n / (2 ell))
  zero,           // m_ell = 0
  custom,         // user-supplied nonincreasing sequence
};

struct SelectionConfig {
  double delta = 2.0;  // penalty constant, must be > 1
  MRule m_rule = MRule::simple_domain;
  std::vector<int> custom_m;  // m_ell for ell = 1, 2, ... (custom rule)
  double rho = 0.0;           // 0 means inherit ctx.rho
  bool fallback_on_empty_grid = true;
  QuadratureParams quad;
};

//! One ladder level with everything the selection rule needs.
struct GridEntry {
  int ell = 0;
  Gamma gamma;
  GramSystem gram;
  double W_h = 0.0;
  std::size_t n_in_window = 0;
  double f_hat = 0.0;
  double v_hat = 0.0;
  double c_gamma = 0.0;
  double eps_gamma = 0.0;
  double Lambda_gamma = 0.0;
  double pen = 0.0;
  double U_hat = 0.0;
  double A_hat = 0.0;
};

struct SelectionReport {
  std::vector<GridEntry> entries;  // ordered by ell
  int selected_ell = 0;
  double f_hat_adaptive = 0.0;
  std::vector<std::string> warnings;
};

//! One row of the full ladder, for inspection (cmd grid).
struct LadderRow {
  int ell = 0;
  int m = 0;
  double h = 0.0;
  double W_h = 0.0;
  double lambda = 0.0;  // NaN when the Gram is singular or not built
  bool qualifies = false;
  bool singular = false;
};

//! All ladder levels ell = 1..floor(log n) with the qualification flag
//! n h^d W_h >= (log n)^3. Grams are built for every level so lambda can be
//! reported; singular levels are flagged.
std::vector<LadderRow> grid_ladder(const EstimationContext& ctx, std::size_t n,
                                   const SelectionConfig& cfg);

//! Qualifying (ell, gamma) levels with their Gram systems. Singular levels
//! are dropped with a warning. When nothing qualifies: either falls back to
//! ell = 1 (with a warning) or throws EmptyGrid, per cfg.
std::vector<GridEntry> build_grid(const EstimationContext& ctx, std::size_t n,
                                  const SelectionConfig& cfg,
                                  std::vector<std::string>& warnings);

struct Penalties {
  double c_gamma = 0.0;
  double eps_gamma = 0.0;
  double Lambda_gamma = 0.0;
  double pen = 0.0;
};

//! c = sqrt(D)/(n h^d lambda), eps = (delta-1) D W_h / (n h^d lambda^2),
//! Lambda = 2 |log lambda|, pen = d delta |log h| + Lambda.
Penalties penalties(const GramSystem& gram, std::size_t n, int d, double delta);

//! sqrt(2 (v_hat + eps) pen) + c pen.
double u_hat(double v_hat, double eps_gamma, double c_gamma, double pen);

//! max over gamma' of {|f_hat(max(gamma,gamma')) - f_hat(gamma')|
//!  - U_hat(max(gamma,gamma')) - U_hat(gamma')}_+ where the max of two
//! levels is the one with the larger bandwidth.
double a_hat(const std::vector<GridEntry>& entries, std::size_t target);

//! Full data-driven selection: builds the grid, fills every entry, and picks
//! argmin (A_hat + U_hat), ties to the smallest ell.
SelectionReport select(const EstimationContext& ctx, const Sample& sample,
                       const SelectionConfig& cfg);

namespace detail {

//! As select but with a pre-built grid (Gram systems do not depend on the
//! sample, so replication loops build the grid once).
SelectionReport select_with_grid(const EstimationContext& ctx,
                                 const Sample& sample,
                                 const SelectionConfig& cfg,
                                 const std::vector<GridEntry>& grid);

}  // namespace detail

}  // namespace lpdens
