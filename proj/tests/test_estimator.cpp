#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "lpdens/estimator.hpp"
#include "lpdens/rng.hpp"

using namespace lpdens;

namespace {

const double kRhoMax = std::exp(-1.0);

Sample random_sample_in_box(const AxisBox& box, std::size_t n, CounterRng& rng) {
  Sample s = Sample::with_dimension(box.dimension());
  std::vector<double> p(box.dimension());
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = 0; j < box.dimension(); ++j) {
      p[j] = box.lower[j] + (box.upper[j] - box.lower[j]) * rng.next_double();
    }
    s.push_back(p);
  }
  return s;
}

}  // namespace

TEST_SUITE("estimator") {

TEST_CASE("m = 0 estimate equals window count / (n (2h)^d)") {
  CounterRng rng(17);
  for (int fixture = 0; fixture < 25; ++fixture) {
    const double w = 0.5 + rng.next_double();
    const AxisBox box{{0.0, 0.0}, {w, w}};
    const Domain domain = Domain::axis_box(box.lower, box.upper);
    const double h = 0.02 + 0.08 * rng.next_double();
    // t far enough inside that the cube fits.
    const std::vector<double> t{h + (w - 2 * h) * rng.next_double(),
                                h + (w - 2 * h) * rng.next_double()};
    const EstimationContext ctx(domain, t, std::min(kRhoMax, w / 2));
    const std::size_t n = 50 + (rng.next_u64() % 200);
    const Sample sample = random_sample_in_box(box, n, rng);
    const GramSystem sys = build_gram(ctx, Gamma{0, h});
    const PointEstimate est = estimate_at(ctx, sys, sample);

    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(sample.cols[0][i] - t[0]) <= h &&
          std::abs(sample.cols[1][i] - t[1]) <= h)
        ++count;
    }
    const double expect = static_cast<double>(count) /
                          (static_cast<double>(n) * 4.0 * h * h);
    CHECK(est.n_in_window == count);
    CHECK(est.f_hat == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("empty window and single-point fixtures") {
  const EstimationContext ctx(Domain::axis_box({0.0, 0.0}, {1.0, 1.0}),
                              {0.5, 0.5}, kRhoMax);
  const GramSystem sys = build_gram(ctx, Gamma{0, 0.1});

  Sample far = Sample::with_dimension(2);
  far.push_back(std::vector<double>{0.9, 0.9});
  PointEstimate est = estimate_at(ctx, sys, far);
  CHECK(est.f_hat == 0.0);
  CHECK(est.v_hat == 0.0);
  CHECK(est.n_in_window == 0);

  Sample at_t = Sample::with_dimension(2);
  at_t.push_back(std::vector<double>{0.5, 0.5});
  est = estimate_at(ctx, sys, at_t);
  CHECK(est.f_hat == doctest::Approx(25.0));  // 1/(2h)^2
  CHECK(est.n_in_window == 1);
}

TEST_CASE("estimate is invariant to sample order") {
  CounterRng rng(23);
  const EstimationContext ctx(Domain::poly_sector(2.0), {0.0, 0.0}, kRhoMax);
  const GramSystem sys = build_gram(ctx, Gamma{1, 0.2});
  Sample s = Sample::with_dimension(2);
  for (int i = 0; i < 400; ++i) {
    const double x = rng.next_double();
    s.push_back(std::vector<double>{x, x * x * rng.next_double()});
  }
  const PointEstimate a = estimate_at(ctx, sys, s);
  Sample rev = Sample::with_dimension(2);
  for (std::size_t i = s.size(); i-- > 0;) rev.push_back(s.row(i));
  const PointEstimate b = estimate_at(ctx, sys, rev);
  CHECK(a.f_hat == doctest::Approx(b.f_hat).epsilon(1e-13));
  CHECK(a.v_hat == doctest::Approx(b.v_hat).epsilon(1e-13));
  CHECK(a.n_in_window == b.n_in_window);
}

TEST_CASE("population mean reproduces constants and polynomials") {
  QuadratureParams tight;
  tight.rel_tol = 1e-10;
  const EstimationContext sector(Domain::poly_sector(2.1), {0.0, 0.0}, kRhoMax);
  const EstimationContext corner(Domain::axis_box({0.0, 0.0}, {1.0, 1.0}),
                                 {0.0, 0.25}, kRhoMax);
  for (const EstimationContext* ctx : {&sector, &corner}) {
    const GramSystem m0 = build_gram(*ctx, Gamma{0, 0.2});
    const auto c7 = [](std::span<const double>) { return 7.0; };
    CHECK(population_mean(*ctx, m0, c7, tight) ==
          doctest::Approx(7.0).epsilon(1e-8));

    const GramSystem m2 = build_gram(*ctx, Gamma{2, 0.2});
    const auto quadratic = [&](std::span<const double> x) {
      return 1.5 + 2.0 * x[0] - x[1] + 0.5 * x[0] * x[1] - x[1] * x[1];
    };
    const std::vector<double>& t = ctx->t;
    const double want = quadratic(t);
    CHECK(population_mean(*ctx, m2, quadratic, tight) ==
          doctest::Approx(want).epsilon(1e-8));
  }
}

TEST_CASE("population mean recovers the quadratic sector density exactly") {
  // f_1 is quadratic, so degree >= 2 projections are exact at any t.
  const double C1 = 15.0;  // 1 / integral over the linear sector
  const auto f1 = [&](std::span<const double> x) {
    return C1 * ((x[0] - 0.6) * (x[0] - 0.6) + (x[1] - 0.2) * (x[1] - 0.2));
  };
  QuadratureParams tight;
  tight.rel_tol = 1e-10;
  const EstimationContext ctx(Domain::poly_sector(1.0), {0.0, 0.0}, kRhoMax);
  for (int m : {2, 3}) {
    const GramSystem sys = build_gram(ctx, Gamma{m, 0.25});
    CHECK(population_mean(ctx, sys, f1, tight) ==
          doctest::Approx(f1(ctx.t)).epsilon(1e-8));
  }
}

TEST_CASE("population variance: scalar case, 1/n scaling, v <= v*") {
  QuadratureParams tight;
  tight.rel_tol = 1e-10;
  const EstimationContext ctx(Domain::axis_box({0.0, 0.0}, {1.0, 1.0}),
                              {0.5, 0.5}, kRhoMax);
  const GramSystem m0 = build_gram(ctx, Gamma{0, 0.1});
  const auto uniform = [](std::span<const double>) { return 1.0; };
  const double v100 = population_variance_upper(ctx, m0, uniform, 100, tight);
  CHECK(v100 == doctest::Approx(0.01 * std::pow(0.1, -2) / 4.0).epsilon(1e-9));
  const double v200 = population_variance_upper(ctx, m0, uniform, 200, tight);
  CHECK(v200 == doctest::Approx(v100 / 2.0).epsilon(1e-9));

  const GramSystem m2 = build_gram(ctx, Gamma{2, 0.1});
  const double v = population_variance_upper(ctx, m2, uniform, 100, tight);
  CHECK(v <= variance_bound_star(m2, 1.0, 100) * (1.0 + 1e-9));
}

TEST_CASE("variance_bound_star algebra") {
  const EstimationContext ctx(Domain::axis_box({0.0, 0.0}, {1.0, 1.0}),
                              {0.5, 0.5}, kRhoMax);
  const GramSystem m0 = build_gram(ctx, Gamma{0, 0.1});
  const double f_sup = 3.0;
  CHECK(variance_bound_star(m0, f_sup, 50) ==
        doctest::Approx(f_sup / (50.0 * 0.01 * 4.0)));
  CHECK(variance_bound_star(m0, 0.0, 50) == 0.0);
  CHECK(variance_bound_star(m0, f_sup, 100) ==
        doctest::Approx(variance_bound_star(m0, f_sup, 50) / 2.0));
}

}  // TEST_SUITE
