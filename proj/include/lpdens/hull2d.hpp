#pragma once

#include <array>
#include <string>
#include <vector>

#include "lpdens/selection.hpp"

namespace lpdens {

//! Index-prefix split of a sample: the first (1-alpha)n points estimate the
//! support, the remaining alpha*n points feed the density estimator.
struct SplitPlan {
  double alpha = 0.5;
  std::size_t first_part_size = 0;
  std::size_t second_part_size = 0;
  bool rounded = false;  // alpha*n was not an integer
};

SplitPlan make_split_plan(std::size_t n, double alpha);

//! Counter-clockwise convex hull by monotone chain; collinear boundary
//! points removed. Throws DegenerateHull when all points are collinear.
std::vector<std::array<double, 2>> convex_hull_2d(
    const std::vector<std::array<double, 2>>& points);

struct HullPointEstimate {
  double tx = 0.0;
  double ty = 0.0;
  bool inside_hull = false;
  double p_hat = 0.0;
  double f_hat = 0.0;
};

struct HullEstimateResult {
  SplitPlan split;
  std::vector<std::array<double, 2>> hull;
  double p_hat = 0.0;
  std::vector<HullPointEstimate> estimates;
  std::vector<std::string> warnings;
};

//! Unknown compact convex support pipeline (d = 2): hull of part 1, retained
//! proportion p_hat of part 2, and p_hat * g_hat(t) at each requested t
//! (0 outside the hull).
HullEstimateResult estimate_unknown_domain(
    const Sample& sample, double alpha,
    const std::vector<std::array<double, 2>>& t_list,
    const SelectionConfig& cfg, int jobs = 1);

}  // namespace lpdens
