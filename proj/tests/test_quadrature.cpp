#include <cmath>

#include "doctest.h"
#include "lpdens/errors.hpp"
#include "lpdens/quadrature.hpp"

using namespace lpdens;

TEST_SUITE("quadrature") {

TEST_CASE("adaptive 1-D on smooth and endpoint-singular integrands") {
  QuadratureParams p;
  CHECK(adaptive_gl_1d([](double x) { return x * x; }, 0.0, 1.0, p) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(adaptive_gl_1d([](double x) { return std::sin(x); }, 0.0, 2.0, p) ==
        doctest::Approx(1.0 - std::cos(2.0)).epsilon(1e-10));
  // Fractional power with unbounded higher derivatives at 0.
  CHECK(adaptive_gl_1d([](double x) { return std::pow(x, 1.1); }, 0.0, 1.0, p) ==
        doctest::Approx(1.0 / 2.1).epsilon(1e-9));
  // A kink is resolved by local refinement.
  CHECK(adaptive_gl_1d([](double x) { return std::abs(x - 0.299); }, 0.0, 1.0,
                       p) ==
        doctest::Approx((0.299 * 0.299 + 0.701 * 0.701) / 2.0).epsilon(1e-9));
}

TEST_CASE("1-D indicator jump exceeds the depth budget at tight tolerance") {
  QuadratureParams p;
  p.rel_tol = 1e-12;
  p.abs_tol = 1e-14;
  p.max_depth = 6;
  CHECK_THROWS_AS(
      adaptive_gl_1d([](double x) { return x < 0.37 ? 1.0 : 0.0; }, 0.0, 1.0, p),
      QuadratureFailure);
}

TEST_CASE("polygon: mass and first moments match the shoelace triangle") {
  const Domain tri =
      Domain::convex_polygon({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}});
  const double area =
      integrate_domain(tri, [](std::span<const double>) { return 1.0; });
  CHECK(area == doctest::Approx(0.5).epsilon(1e-12));
  const double mx =
      integrate_domain(tri, [](std::span<const double> x) { return x[0]; });
  CHECK(mx == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  const double my =
      integrate_domain(tri, [](std::span<const double> x) { return x[1]; });
  CHECK(my == doctest::Approx(1.0 / 6.0).epsilon(1e-10));
}

TEST_CASE("pentagon area against the shoelace formula") {
  const std::vector<std::array<double, 2>> verts = {
      {0.0, 0.0}, {0.8, -0.2}, {1.3, 0.5}, {0.6, 1.1}, {-0.2, 0.6}};
  double shoelace = 0.0;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const auto& a = verts[i];
    const auto& b = verts[(i + 1) % verts.size()];
    shoelace += a[0] * b[1] - b[0] * a[1];
  }
  shoelace *= 0.5;
  const Domain poly = Domain::convex_polygon(verts);
  const double area =
      integrate_domain(poly, [](std::span<const double>) { return 1.0; });
  CHECK(area == doctest::Approx(shoelace).epsilon(1e-10));
}

TEST_CASE("3-D box integral of a separable function") {
  const Domain box = Domain::axis_box({0, 0, 0}, {1, 2, 1});
  const double val = integrate_domain(box, [](std::span<const double> x) {
    return x[0] * x[1] * std::exp(x[2]);
  });
  CHECK(val == doctest::Approx(0.5 * 2.0 * (std::exp(1.0) - 1.0)).epsilon(1e-9));
}

}  // TEST_SUITE
