#include "lpdens/multi_index.hpp"

#include <algorithm>
#include <stdexcept>

#include "lpdens/errors.hpp"

namespace lpdens {

std::int64_t basis_dim(int d, int m) {
  if (d < 1) throw std::invalid_argument("basis_dim: d must be >= 1");
  if (m < 0) throw std::invalid_argument("basis_dim: m must be >= 0");
  if (m + d > 60) throw std::invalid_argument("basis_dim: m + d > 60");
  // C(m + d, d) by incremental multiplication, exact in int64 for m + d <= 60.
  std::int64_t r = 1;
  for (int i = 1; i <= d; ++i) r = r * (m + i) / i;
  return r;
}

namespace {

bool index_less(const MultiIndex& a, const MultiIndex& b) {
  const int da = a.degree();
  const int db = b.degree();
  if (da != db) return da < db;
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    if (a.entries[i] != b.entries[i]) return a.entries[i] < b.entries[i];
  }
  return false;
}

void gen(int d, int m, int pos, int remaining, std::vector<int>& cur,
         std::vector<MultiIndex>& out) {
  if (pos == d) {
    out.push_back(MultiIndex{cur});
    return;
  }
  for (int e = 0; e <= remaining; ++e) {
    cur[pos] = e;
    gen(d, m, pos + 1, remaining - e, cur, out);
  }
  cur[pos] = 0;
}

}  // namespace

Basis enumerate_basis(int d, int m) {
  const std::int64_t n = basis_dim(d, m);
  Basis basis;
  basis.d = d;
  basis.m = m;
  basis.indices.reserve(static_cast<std::size_t>(n));
  std::vector<int> cur(d, 0);
  gen(d, m, 0, m, cur, basis.indices);
  std::sort(basis.indices.begin(), basis.indices.end(), index_less);
  basis.exps.resize(basis.indices.size() * static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < basis.indices.size(); ++i) {
    for (int j = 0; j < d; ++j) {
      basis.exps[i * static_cast<std::size_t>(d) + j] =
          basis.indices[i].entries[j];
    }
  }
  return basis;
}

void eval_phi(const Basis& basis, std::span<const double> u, double h,
              std::span<double> out) {
  if (static_cast<int>(u.size()) != basis.d)
    throw DimensionMismatch("eval_phi: point dimension mismatch");
  if (out.size() != basis.size())
    throw DimensionMismatch("eval_phi: output size mismatch");
  if (!(h > 0)) throw std::invalid_argument("eval_phi: h must be > 0");
  // Power tables per coordinate, pw[j][e] = (u_j/h)^e.
  const int d = basis.d;
  const int m = basis.m;
  std::vector<double> pw(static_cast<std::size_t>(d) * (m + 1));
  for (int j = 0; j < d; ++j) {
    const double x = u[j] / h;
    double p = 1.0;
    for (int e = 0; e <= m; ++e) {
      pw[static_cast<std::size_t>(j) * (m + 1) + e] = p;
      p *= x;
    }
  }
  for (std::size_t i = 0; i < basis.size(); ++i) {
    double v = 1.0;
    for (int j = 0; j < d; ++j) {
      const int e = basis.exps[i * static_cast<std::size_t>(d) + j];
      v *= pw[static_cast<std::size_t>(j) * (m + 1) + e];
    }
    out[i] = v;
  }
}

std::vector<double> eval_phi(const Basis& basis, std::span<const double> u,
                             double h) {
  std::vector<double> out(basis.size());
  eval_phi(basis, u, h, out);
  return out;
}

}  // namespace lpdens
