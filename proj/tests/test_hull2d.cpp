#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "lpdens/errors.hpp"
#include "lpdens/hull2d.hpp"
#include "lpdens/rng.hpp"

using namespace lpdens;

namespace {

//! Gift-wrapping hull with the same orientation conventions, used as an
//! independent oracle against the monotone chain.
std::vector<std::array<double, 2>> jarvis_hull(
    std::vector<std::array<double, 2>> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = pts.size();
  if (n < 3) throw DegenerateHull("jarvis: too few points");
  const auto cross = [](const std::array<double, 2>& o,
                        const std::array<double, 2>& a,
                        const std::array<double, 2>& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<std::array<double, 2>> hull;
  std::size_t start = 0;  // lexicographically smallest after sort
  std::size_t p = start;
  do {
    hull.push_back(pts[p]);
    std::size_t q = (p + 1) % n;
    for (std::size_t r = 0; r < n; ++r) {
      const double c = cross(pts[p], pts[q], pts[r]);
      if (c < 0.0) q = r;  // r is to the right: more clockwise candidate
      else if (c == 0.0 && r != p) {
        // Collinear: keep the farther point so interior boundary points drop.
        const double dq = std::hypot(pts[q][0] - pts[p][0], pts[q][1] - pts[p][1]);
        const double dr = std::hypot(pts[r][0] - pts[p][0], pts[r][1] - pts[p][1]);
        if (dr > dq) q = r;
      }
    }
    p = q;
  } while (p != start && hull.size() <= n);
  if (hull.size() < 3) throw DegenerateHull("jarvis: collinear");
  return hull;
}

Sample square_cloud(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed);
  Sample s = Sample::with_dimension(2);
  for (std::size_t i = 0; i < n; ++i)
    s.push_back(std::vector<double>{rng.next_double(), rng.next_double()});
  return s;
}

}  // namespace

TEST_SUITE("hull2d") {

TEST_CASE("hull fixtures") {
  const auto square = convex_hull_2d({{0, 0}, {1, 0}, {1, 1}, {0, 1},
                                      {0.5, 0.5}, {0.2, 0.7}, {0.9, 0.1}});
  REQUIRE(square.size() == 4);
  CHECK(square[0] == std::array<double, 2>{0, 0});
  CHECK(square[1] == std::array<double, 2>{1, 0});
  CHECK(square[2] == std::array<double, 2>{1, 1});
  CHECK(square[3] == std::array<double, 2>{0, 1});

  const auto tri = convex_hull_2d({{0, 0}, {2, 0}, {1, 1}});
  CHECK(tri.size() == 3);

  CHECK_THROWS_AS(convex_hull_2d({{0, 0}, {1, 1}, {2, 2}, {3, 3}}),
                  DegenerateHull);
  CHECK_THROWS_AS(convex_hull_2d({{0, 0}, {1, 1}}), DegenerateHull);
}

TEST_CASE("monotone chain equals the gift-wrapping oracle") {
  CounterRng rng(555);
  for (int fixture = 0; fixture < 60; ++fixture) {
    const std::size_t n = 3 + rng.next_u64() % 48;
    std::vector<std::array<double, 2>> pts(n);
    for (auto& p : pts) p = {rng.next_double(), rng.next_double()};
    const auto a = convex_hull_2d(pts);
    const auto b = jarvis_hull(pts);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  }
}

TEST_CASE("hull is counter-clockwise and contains every input point") {
  CounterRng rng(556);
  std::vector<std::array<double, 2>> pts(300);
  for (auto& p : pts) p = {rng.next_double(), rng.next_double()};
  const auto hull = convex_hull_2d(pts);
  double area2 = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    area2 += a[0] * b[1] - b[0] * a[1];
  }
  CHECK(area2 > 0.0);  // counter-clockwise
  const Domain poly = Domain::convex_polygon(hull);
  for (const auto& p : pts)
    CHECK(poly.contains(std::vector<double>{p[0], p[1]}));
}

TEST_CASE("split plan rounding") {
  const SplitPlan even = make_split_plan(10, 0.5);
  CHECK(even.first_part_size == 5);
  CHECK(even.second_part_size == 5);
  CHECK_FALSE(even.rounded);

  const SplitPlan odd = make_split_plan(11, 0.5);
  CHECK(odd.rounded);
  CHECK(odd.first_part_size + odd.second_part_size == 11);

  CHECK_THROWS_AS(make_split_plan(10, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_split_plan(10, 1.0), std::invalid_argument);
}

TEST_CASE("retention proportion is monotone in the support") {
  CounterRng rng(77);
  std::vector<std::array<double, 2>> pts(500);
  for (auto& p : pts) p = {rng.next_double(), rng.next_double()};
  const Domain small_poly = Domain::convex_polygon(
      {{0.25, 0.25}, {0.75, 0.25}, {0.75, 0.75}, {0.25, 0.75}});
  const Domain big_poly = Domain::convex_polygon(
      {{0.1, 0.1}, {0.9, 0.1}, {0.9, 0.9}, {0.1, 0.9}});
  std::size_t in_small = 0, in_big = 0;
  for (const auto& p : pts) {
    const std::vector<double> x{p[0], p[1]};
    in_small += small_poly.contains(x);
    in_big += big_poly.contains(x);
  }
  CHECK(in_small <= in_big);
}

TEST_CASE("estimate_unknown_domain on uniform square data") {
  const Sample sample = square_cloud(10000, 31);
  SelectionConfig cfg;
  const auto result = estimate_unknown_domain(
      sample, 0.5,
      {{0.5, 0.5}, {5.0, 5.0}},  // one interior point, one far outside
      cfg, 2);
  CHECK(result.split.first_part_size == 5000);
  CHECK(result.p_hat > 0.9);
  CHECK(result.p_hat <= 1.0);

  REQUIRE(result.estimates.size() == 2);
  CHECK(result.estimates[0].inside_hull);
  CHECK(std::abs(result.estimates[0].f_hat - 1.0) < 0.25);
  CHECK_FALSE(result.estimates[1].inside_hull);
  CHECK(result.estimates[1].f_hat == 0.0);

  // Every part-1 point lies inside the estimated support.
  const Domain poly = Domain::convex_polygon(result.hull);
  for (std::size_t i = 0; i < result.split.first_part_size; ++i) {
    CHECK(poly.contains(std::vector<double>{sample.cols[0][i],
                                            sample.cols[1][i]}));
  }
}

TEST_CASE("all of part 2 inside the hull gives p_hat = 1") {
  Sample s = Sample::with_dimension(2);
  // Part 1: square corners; part 2: interior points.
  s.push_back(std::vector<double>{0.0, 0.0});
  s.push_back(std::vector<double>{1.0, 0.0});
  s.push_back(std::vector<double>{1.0, 1.0});
  s.push_back(std::vector<double>{0.0, 1.0});
  s.push_back(std::vector<double>{0.3, 0.3});
  s.push_back(std::vector<double>{0.6, 0.2});
  s.push_back(std::vector<double>{0.5, 0.7});
  s.push_back(std::vector<double>{0.2, 0.6});
  SelectionConfig cfg;
  const auto result =
      estimate_unknown_domain(s, 0.5, {{0.4, 0.4}}, cfg, 1);
  CHECK(result.p_hat == 1.0);
  CHECK(result.estimates[0].inside_hull);
}

TEST_CASE("degenerate first part") {
  Sample s = Sample::with_dimension(2);
  for (int i = 0; i < 6; ++i)
    s.push_back(std::vector<double>{0.1 * i, 0.1 * i});  // collinear
  SelectionConfig cfg;
  CHECK_THROWS_AS(estimate_unknown_domain(s, 0.5, {{0.0, 0.0}}, cfg, 1),
                  DegenerateHull);
}

}  // TEST_SUITE
