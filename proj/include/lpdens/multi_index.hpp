#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace lpdens {

//! Multi-index of monomial exponents, one entry per coordinate.
struct MultiIndex {
  std::vector<int> entries;

  int degree() const {
    int s = 0;
    for (int e : entries) s += e;
    return s;
  }
};

//! Ordered monomial basis of the polynomials of total degree <= m in d
//! variables. Indices are sorted by total degree first, then by the first
//! differing coordinate (smaller exponent first), so the basis for degree
//! m' < m is always a prefix of the basis for degree m.
struct Basis {
  int d = 0;
  int m = 0;
  std::vector<MultiIndex> indices;
  // Flattened exponent table, exps[i * d + j] = indices[i].entries[j].
  std::vector<int> exps;

  std::size_t size() const { return indices.size(); }
};

//! Dimension of the basis: C(m + d, d). Rejects m + d > 60.
std::int64_t basis_dim(int d, int m);

Basis enumerate_basis(int d, int m);

//! Evaluates the rescaled monomial vector at u: out[i] = prod_j (u_j/h)^a_ij.
//! out must have basis.size() entries. Powers are computed by repeated
//! multiplication.
void eval_phi(const Basis& basis, std::span<const double> u, double h,
              std::span<double> out);

std::vector<double> eval_phi(const Basis& basis, std::span<const double> u,
                             double h);

}  // namespace lpdens
