#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "lpdens/multi_index.hpp"
#include "lpdens/rng.hpp"

using namespace lpdens;

namespace {

std::vector<std::vector<int>> entries_of(const Basis& b) {
  std::vector<std::vector<int>> out;
  for (const auto& idx : b.indices) out.push_back(idx.entries);
  return out;
}

}  // namespace

TEST_SUITE("basis") {

TEST_CASE("dimension counts") {
  CHECK(basis_dim(2, 0) == 1);
  CHECK(basis_dim(2, 2) == 6);
  CHECK(basis_dim(3, 1) == 4);
  CHECK(basis_dim(1, 7) == 8);
  CHECK_THROWS_AS(basis_dim(2, 59), std::invalid_argument);
  CHECK_THROWS_AS(basis_dim(0, 1), std::invalid_argument);
}

TEST_CASE("ordering follows degree then first differing coordinate") {
  CHECK(entries_of(enumerate_basis(2, 1)) ==
        std::vector<std::vector<int>>{{0, 0}, {0, 1}, {1, 0}});
  CHECK(entries_of(enumerate_basis(1, 2)) ==
        std::vector<std::vector<int>>{{0}, {1}, {2}});
  CHECK(entries_of(enumerate_basis(2, 2)) ==
        std::vector<std::vector<int>>{
            {0, 0}, {0, 1}, {1, 0}, {0, 2}, {1, 1}, {2, 0}});
}

TEST_CASE("lower-degree basis is a prefix of higher-degree basis") {
  for (int d : {1, 2, 3}) {
    const Basis big = enumerate_basis(d, 5);
    for (int m = 0; m < 5; ++m) {
      const Basis small = enumerate_basis(d, m);
      REQUIRE(small.size() == static_cast<std::size_t>(basis_dim(d, m)));
      for (std::size_t i = 0; i < small.size(); ++i) {
        CHECK(small.indices[i].entries == big.indices[i].entries);
      }
    }
  }
}

TEST_CASE("eval_phi examples") {
  const Basis b21 = enumerate_basis(2, 1);
  const std::vector<double> zero{0.0, 0.0};
  auto phi = eval_phi(b21, zero, 0.3);
  CHECK(phi == std::vector<double>{1.0, 0.0, 0.0});

  const std::vector<double> hh{0.3, 0.3};
  phi = eval_phi(b21, hh, 0.3);
  CHECK(phi[0] == doctest::Approx(1.0));
  CHECK(phi[1] == doctest::Approx(1.0));
  CHECK(phi[2] == doctest::Approx(1.0));

  const Basis b22 = enumerate_basis(2, 2);
  const std::vector<double> u{0.2, 0.4};
  phi = eval_phi(b22, u, 0.4);
  const std::vector<double> want{1.0, 1.0, 0.5, 1.0, 0.5, 0.25};
  REQUIRE(phi.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i)
    CHECK(phi[i] == doctest::Approx(want[i]).epsilon(1e-14));
}

TEST_CASE("components bounded by 1 inside the window, and h-scaling") {
  CounterRng rng(11);
  const Basis b = enumerate_basis(2, 4);
  for (int trial = 0; trial < 200; ++trial) {
    const double h = 0.05 + rng.next_double();
    const std::vector<double> u{(2 * rng.next_double() - 1) * h,
                                (2 * rng.next_double() - 1) * h};
    const auto phi = eval_phi(b, u, h);
    for (double v : phi) CHECK(std::abs(v) <= 1.0 + 1e-12);

    const std::vector<double> scaled{u[0] / h, u[1] / h};
    const auto phi1 = eval_phi(b, scaled, 1.0);
    for (std::size_t i = 0; i < phi.size(); ++i)
      CHECK(phi[i] == doctest::Approx(phi1[i]).epsilon(1e-12));
  }
}

}  // TEST_SUITE
