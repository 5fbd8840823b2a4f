#include <cmath>

#include "doctest.h"
#include "lpdens/errors.hpp"
#include "lpdens/rng.hpp"
#include "lpdens/selection.hpp"

using namespace lpdens;

namespace {

const double kRhoMax = std::exp(-1.0);

GridEntry stub_entry(int ell, double h, double f_hat, double U_hat) {
  GridEntry e;
  e.ell = ell;
  e.gamma = Gamma{0, h};
  e.f_hat = f_hat;
  e.U_hat = U_hat;
  return e;
}

GramSystem stub_gram(int m, double h, double lambda, double W_h) {
  GramSystem sys;
  sys.gamma = Gamma{m, h};
  sys.basis = enumerate_basis(2, m);
  sys.lambda = lambda;
  sys.W_h = W_h;
  return sys;
}

Sample uniform_square_sample(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed);
  Sample s = Sample::with_dimension(2);
  for (std::size_t i = 0; i < n; ++i) {
    s.push_back(std::vector<double>{rng.next_double(), rng.next_double()});
  }
  return s;
}

}  // namespace

TEST_SUITE("selection") {

TEST_CASE("penalty ingredients") {
  // d=2, delta=2, h=e^-2, lambda=1: pen = 2*2*2 + 0 = 8.
  const GramSystem g = stub_gram(0, std::exp(-2.0), 1.0, 4.0);
  const Penalties p = penalties(g, 1000, 2, 2.0);
  CHECK(p.pen == doctest::Approx(8.0));
  CHECK(p.Lambda_gamma == 0.0);
  const double nhd = 1000.0 * std::exp(-4.0);
  CHECK(p.c_gamma == doctest::Approx(1.0 / nhd));
  CHECK(p.eps_gamma == doctest::Approx(4.0 / nhd));

  // delta -> 1+ kills eps.
  const Penalties p1 = penalties(g, 1000, 2, 1.0 + 1e-12);
  CHECK(p1.eps_gamma == doctest::Approx(0.0).scale(1.0));

  // lambda != 1 contributes 2|log lambda|.
  const GramSystem g2 = stub_gram(0, std::exp(-2.0), 0.1, 4.0);
  CHECK(penalties(g2, 1000, 2, 2.0).Lambda_gamma ==
        doctest::Approx(2.0 * std::log(10.0)));
}

TEST_CASE("u_hat arithmetic") {
  CHECK(u_hat(0.0, 0.0, 0.3, 5.0) == doctest::Approx(1.5));
  CHECK(u_hat(1.0, 1.0, 0.0, 1.0) == doctest::Approx(2.0));
  CHECK(u_hat(0.5, 0.5, 0.1, 8.0) == doctest::Approx(4.8));
  CHECK_THROWS_AS(u_hat(0.5, 0.0, 0.1, 0.0), std::invalid_argument);
}

TEST_CASE("a_hat two-entry fixture and smallest-bandwidth zero") {
  std::vector<GridEntry> entries;
  entries.push_back(stub_entry(1, 0.2, 1.0, 0.1));
  entries.push_back(stub_entry(2, 0.1, 0.2, 0.1));
  CHECK(a_hat(entries, 0) == doctest::Approx(0.6));
  CHECK(a_hat(entries, 1) == 0.0);

  // Selection criterion picks ell = 2: 0.7 vs 0.1.
  const double crit1 = a_hat(entries, 0) + entries[0].U_hat;
  const double crit2 = a_hat(entries, 1) + entries[1].U_hat;
  CHECK(crit1 == doctest::Approx(0.7));
  CHECK(crit2 == doctest::Approx(0.1));

  // All estimates equal: every A_hat is zero.
  std::vector<GridEntry> flat;
  for (int ell = 1; ell <= 4; ++ell)
    flat.push_back(stub_entry(ell, std::exp(-ell), 2.5, 0.01));
  for (std::size_t i = 0; i < flat.size(); ++i) CHECK(a_hat(flat, i) == 0.0);

  // Single entry.
  std::vector<GridEntry> single{stub_entry(1, 0.2, 3.0, 0.5)};
  CHECK(a_hat(single, 0) == 0.0);
}

TEST_CASE("a_hat literal form equals the reduced form") {
  CounterRng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<GridEntry> entries;
    const int count = 2 + static_cast<int>(rng.next_u64() % 6);
    for (int ell = 1; ell <= count; ++ell) {
      entries.push_back(stub_entry(ell, 0.4 * std::exp(-ell),
                                   4.0 * rng.next_double() - 2.0,
                                   rng.next_double()));
    }
    for (std::size_t i = 0; i < entries.size(); ++i) {
      double reduced = 0.0;
      for (std::size_t j = 0; j < entries.size(); ++j) {
        if (entries[j].gamma.h > entries[i].gamma.h) continue;
        const double term = std::abs(entries[i].f_hat - entries[j].f_hat) -
                            entries[i].U_hat - entries[j].U_hat;
        reduced = std::max(reduced, term);
      }
      CHECK(a_hat(entries, i) == doctest::Approx(reduced).epsilon(1e-14));
    }
  }
}

TEST_CASE("build_grid matches the n = 1e6 unit-square worked example") {
  const EstimationContext ctx(Domain::axis_box({0.0, 0.0}, {1.0, 1.0}),
                              {0.5, 0.5}, kRhoMax);
  SelectionConfig cfg;
  std::vector<std::string> warnings;
  const auto entries = build_grid(ctx, 1000000, cfg, warnings);
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].ell == 1);
  CHECK(entries[0].gamma.m == 6);
  CHECK(entries[0].gamma.h == doctest::Approx(std::exp(-2.0)));
  CHECK(entries[1].ell == 2);
  CHECK(entries[1].gamma.m == 3);
  CHECK(warnings.empty());

  // Ladder monotonicity.
  CHECK(entries[0].gamma.h > entries[1].gamma.h);
  CHECK(entries[0].gamma.m >= entries[1].gamma.m);
}

TEST_CASE("empty grid: fallback and error paths") {
  const EstimationContext ctx(Domain::axis_box({0.0, 0.0}, {1.0, 1.0}),
                              {0.5, 0.5}, kRhoMax);
  SelectionConfig cfg;
  std::vector<std::string> warnings;
  const auto entries = build_grid(ctx, 100, cfg, warnings);
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].ell == 1);
  REQUIRE(warnings.size() == 1);

  cfg.fallback_on_empty_grid = false;
  warnings.clear();
  CHECK_THROWS_AS(build_grid(ctx, 100, cfg, warnings), EmptyGrid);
}

TEST_CASE("custom degree rule validation") {
  const EstimationContext ctx(Domain::axis_box({0.0, 0.0}, {1.0, 1.0}),
                              {0.5, 0.5}, kRhoMax);
  SelectionConfig cfg;
  cfg.m_rule = MRule::custom;
  cfg.custom_m = {2, 3};  // increasing: invalid
  std::vector<std::string> warnings;
  CHECK_THROWS_AS(build_grid(ctx, 1000, cfg, warnings), std::invalid_argument);
  cfg.custom_m = {2};  // too short for floor(log 1000) = 6 levels
  CHECK_THROWS_AS(build_grid(ctx, 1000, cfg, warnings), std::invalid_argument);
  cfg.custom_m = {3, 2, 2, 1, 0, 0};
  CHECK_NOTHROW(build_grid(ctx, 1000, cfg, warnings));
  CHECK_THROWS_AS([&] {
    SelectionConfig bad;
    bad.delta = 1.0;
    return build_grid(ctx, 1000, bad, warnings);
  }(), std::invalid_argument);
}

TEST_CASE("select: single-entry grid returns that entry") {
  const EstimationContext ctx(Domain::axis_box({0.0, 0.0}, {1.0, 1.0}),
                              {0.5, 0.5}, kRhoMax);
  SelectionConfig cfg;
  const Sample sample = uniform_square_sample(500, 41);
  const SelectionReport report = select(ctx, sample, cfg);
  REQUIRE(report.entries.size() == 1);
  CHECK(report.selected_ell == report.entries[0].ell);
  CHECK(report.f_hat_adaptive == report.entries[0].f_hat);
  CHECK(report.entries[0].A_hat == 0.0);
}

TEST_CASE("select on uniform data lands near the true density") {
  const EstimationContext ctx(Domain::axis_box({0.0, 0.0}, {1.0, 1.0}),
                              {0.5, 0.5}, kRhoMax);
  SelectionConfig cfg;
  const Sample sample = uniform_square_sample(1000000, 4242);
  const SelectionReport report = select(ctx, sample, cfg);
  REQUIRE(report.entries.size() == 2);
  const GridEntry* sel = nullptr;
  for (const auto& e : report.entries)
    if (e.ell == report.selected_ell) sel = &e;
  REQUIRE(sel != nullptr);
  CHECK(std::abs(report.f_hat_adaptive - 1.0) <=
        3.0 * std::sqrt(sel->v_hat) + 1e-12);

  // Determinism: identical inputs give an identical report.
  const SelectionReport again = select(ctx, sample, cfg);
  CHECK(again.selected_ell == report.selected_ell);
  CHECK(again.f_hat_adaptive == report.f_hat_adaptive);
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    CHECK(again.entries[i].f_hat == report.entries[i].f_hat);
    CHECK(again.entries[i].U_hat == report.entries[i].U_hat);
    CHECK(again.entries[i].A_hat == report.entries[i].A_hat);
  }
}

TEST_CASE("scale equivariance on a box fixture") {
  // c close enough to 1 that the (scale-dependent) qualification condition
  // admits the same ladder levels on both sides.
  const double c = 0.8;
  const std::size_t n = 1000000;
  const Sample sample = uniform_square_sample(n, 99);
  Sample scaled = Sample::with_dimension(2);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    scaled.push_back(
        std::vector<double>{c * sample.cols[0][i], c * sample.cols[1][i]});
  }
  SelectionConfig cfg;
  const EstimationContext ctx(Domain::axis_box({0.0, 0.0}, {1.0, 1.0}),
                              {0.5, 0.5}, std::exp(-1.0));
  const EstimationContext ctx_scaled(
      Domain::axis_box({0.0, 0.0}, {c, c}), {c * 0.5, c * 0.5},
      c * std::exp(-1.0));
  const SelectionReport a = select(ctx, sample, cfg);
  const SelectionReport b = select(ctx_scaled, scaled, cfg);
  REQUIRE(a.entries.size() >= 2);
  REQUIRE(a.entries.size() == b.entries.size());
  CHECK(a.selected_ell == b.selected_ell);
  const double scale = std::pow(c, -2);
  CHECK(b.f_hat_adaptive == doctest::Approx(scale * a.f_hat_adaptive).epsilon(1e-10));
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    CHECK(b.entries[i].W_h == doctest::Approx(a.entries[i].W_h).epsilon(1e-12));
    CHECK(b.entries[i].f_hat ==
          doctest::Approx(scale * a.entries[i].f_hat).epsilon(1e-10));
  }
}

}  // TEST_SUITE
