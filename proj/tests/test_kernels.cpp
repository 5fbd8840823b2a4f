#include <cmath>
#include <cstring>
#include <vector>

#include "doctest.h"
#include "lpdens/kernels.hpp"
#include "lpdens/multi_index.hpp"
#include "lpdens/rng.hpp"

using namespace lpdens;

TEST_SUITE("kernels") {

TEST_CASE("counter rng is deterministic with independent substreams") {
  CounterRng a(123), b(123);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  CounterRng s0 = CounterRng::substream(7, 0);
  CounterRng s1 = CounterRng::substream(7, 1);
  int same = 0;
  for (int i = 0; i < 64; ++i) same += (s0.next_u64() == s1.next_u64());
  CHECK(same == 0);

  CounterRng u(9);
  double mean = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double v = u.next_double();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
    mean += v;
  }
  mean /= 10000.0;
  CHECK(std::abs(mean - 0.5) < 0.02);
}

TEST_CASE("runtime kernel matches the scalar reference") {
  const kernels::MomentFn fn = kernels::select_moments2d();
  CounterRng rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    const int m = static_cast<int>(rng.next_u64() % 7);
    const Basis basis = enumerate_basis(2, m);
    const std::size_t nb = basis.size();
    std::vector<int> e1(nb), e2(nb);
    for (std::size_t k = 0; k < nb; ++k) {
      e1[k] = basis.exps[k * 2];
      e2[k] = basis.exps[k * 2 + 1];
    }
    std::vector<double> w(nb);
    for (auto& v : w) v = 20.0 * rng.next_double() - 10.0;
    const std::size_t n = rng.next_u64() % 230;
    std::vector<double> ux(n), uy(n);
    for (std::size_t i = 0; i < n; ++i) {
      ux[i] = 2.0 * rng.next_double() - 1.0;
      uy[i] = 2.0 * rng.next_double() - 1.0;
    }
    const auto ref = kernels::moments2d_scalar(ux.data(), uy.data(), n,
                                               e1.data(), e2.data(), nb, m,
                                               w.data());
    const auto got =
        fn(ux.data(), uy.data(), n, e1.data(), e2.data(), nb, m, w.data());
    const double scale_s = std::abs(ref.sum) + 1.0;
    const double scale_q = std::abs(ref.sum_sq) + 1.0;
    CHECK(std::abs(got.sum - ref.sum) <= 1e-12 * scale_s);
    CHECK(std::abs(got.sum_sq - ref.sum_sq) <= 1e-12 * scale_q);
  }
}

TEST_CASE("kernel name is a known value") {
  const char* name = kernels::active_kernel_name();
  CHECK((std::strcmp(name, "avx2") == 0 || std::strcmp(name, "scalar") == 0));
}

}  // TEST_SUITE
