#include "lpdens/hull2d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lpdens/errors.hpp"
#include "lpdens/parallel.hpp"

namespace lpdens {

SplitPlan make_split_plan(std::size_t n, double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::invalid_argument("make_split_plan: alpha must be in (0, 1)");
  SplitPlan plan;
  plan.alpha = alpha;
  const double exact = alpha * static_cast<double>(n);
  std::size_t second = static_cast<std::size_t>(std::llround(exact));
  plan.rounded = std::abs(exact - static_cast<double>(second)) > 1e-9;
  second = std::min(second, n);
  plan.second_part_size = second;
  plan.first_part_size = n - second;
  return plan;
}

namespace {

double cross(const std::array<double, 2>& o, const std::array<double, 2>& a,
             const std::array<double, 2>& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

}  // namespace

std::vector<std::array<double, 2>> convex_hull_2d(
    const std::vector<std::array<double, 2>>& points) {
  std::vector<std::array<double, 2>> pts = points;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = pts.size();
  if (n < 3) throw DegenerateHull("convex_hull_2d: fewer than 3 distinct points");

  std::vector<std::array<double, 2>> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);  // last point repeats the first
  if (hull.size() < 3)
    throw DegenerateHull("convex_hull_2d: points are collinear");
  return hull;
}

HullEstimateResult estimate_unknown_domain(
    const Sample& sample, double alpha,
    const std::vector<std::array<double, 2>>& t_list,
    const SelectionConfig& cfg, int jobs) {
  if (sample.d != 2)
    throw DimensionMismatch("estimate_unknown_domain: requires d = 2");
  const std::size_t n = sample.size();
  HullEstimateResult result;
  result.split = make_split_plan(n, alpha);
  if (result.split.rounded)
    result.warnings.push_back("alpha * n is not an integer; rounded to " +
                              std::to_string(result.split.second_part_size));
  if (result.split.first_part_size < 3)
    throw DegenerateHull("estimate_unknown_domain: first part has < 3 points");
  if (result.split.second_part_size < 1)
    throw std::invalid_argument("estimate_unknown_domain: empty second part");

  std::vector<std::array<double, 2>> part1(result.split.first_part_size);
  for (std::size_t i = 0; i < part1.size(); ++i) {
    part1[i] = {sample.cols[0][i], sample.cols[1][i]};
  }
  result.hull = convex_hull_2d(part1);
  const Domain hull_domain = Domain::convex_polygon(result.hull);

  Sample retained = Sample::with_dimension(2);
  std::size_t part2_count = 0;
  double p[2];
  for (std::size_t i = result.split.first_part_size; i < n; ++i) {
    ++part2_count;
    p[0] = sample.cols[0][i];
    p[1] = sample.cols[1][i];
    if (hull_domain.contains(std::span<const double>(p, 2)))
      retained.push_back(std::span<const double>(p, 2));
  }
  result.p_hat =
      static_cast<double>(retained.size()) / static_cast<double>(part2_count);

  result.estimates.resize(t_list.size());
  if (retained.size() == 0)
    result.warnings.push_back(
        "no second-part point falls inside the estimated support; "
        "estimates are zero");

  parallel_for(t_list.size(), jobs, [&](std::size_t i) {
    HullPointEstimate& est = result.estimates[i];
    est.tx = t_list[i][0];
    est.ty = t_list[i][1];
    est.p_hat = result.p_hat;
    const double tp[2] = {est.tx, est.ty};
    if (!hull_domain.contains(std::span<const double>(tp, 2))) return;
    est.inside_hull = true;
    if (retained.size() == 0) return;
    const EstimationContext ctx(hull_domain, {est.tx, est.ty},
                                default_rho(hull_domain));
    const SelectionReport report = select(ctx, retained, cfg);
    est.f_hat = result.p_hat * report.f_hat_adaptive;
  });
  return result;
}

}  // namespace lpdens
