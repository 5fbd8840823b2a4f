#include "lpdens/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "lpdens/errors.hpp"
#include "lpdens/parallel.hpp"
#include "lpdens/quadrature.hpp"

namespace lpdens {

double TargetDensity::pdf(std::span<const double> x) const {
  if (!domain.contains(x)) return 0.0;
  return raw(x) / norm_const;
}

namespace {

std::string format_k(double k) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", k);
  return buf;
}

double grid_envelope(const TargetDensity& density) {
  const AxisBox& bb = density.domain.bounding_box();
  const int res = 400;
  const double dx = (bb.upper[0] - bb.lower[0]) / res;
  const double dy = (bb.upper[1] - bb.lower[1]) / res;
  double sup = 0.0;
  double p[2];
  for (int i = 0; i < res; ++i) {
    p[0] = bb.lower[0] + (i + 0.5) * dx;
    for (int j = 0; j < res; ++j) {
      p[1] = bb.lower[1] + (j + 0.5) * dy;
      sup = std::max(sup, density.pdf(std::span<const double>(p, 2)));
    }
  }
  return 1.05 * sup;
}

}  // namespace

TargetDensity make_test_density(TestDensityKind kind, double k,
                                const QuadratureParams& params) {
  if (!(k >= 1.0)) throw std::invalid_argument("make_test_density: k must be >= 1");
  TargetDensity density;
  density.domain = Domain::poly_sector(k);
  switch (kind) {
    case TestDensityKind::poly_fk:
      density.name = "poly_f" + format_k(k);
      density.raw = [](std::span<const double> x) {
        const double a = x[0] - 0.6;
        const double b = x[1] - 0.2;
        return a * a + b * b;
      };
      break;
    case TestDensityKind::gauss_gk: {
      density.name = "gauss_g" + format_k(k);
      const double ax = 0.1, ay = std::pow(0.1, k) / 2.0;
      const double cx = 0.75, cy = std::pow(0.75, k) / 2.0;
      const double s1 = 2.0 * 0.4 * 0.4;
      const double s2 = 2.0 * 0.15 * 0.15;
      density.raw = [=](std::span<const double> x) {
        const double d1 = (x[0] - ax) * (x[0] - ax) + (x[1] - ay) * (x[1] - ay);
        const double d2 = (x[0] - cx) * (x[0] - cx) + (x[1] - cy) * (x[1] - cy);
        return std::exp(-d1 / s1) + std::exp(-d2 / s2);
      };
      break;
    }
    case TestDensityKind::uniform:
      density.name = "uniform" + format_k(k);
      density.raw = [](std::span<const double>) { return 1.0; };
      break;
  }
  density.norm_const = integrate_domain(density.domain, density.raw, params);
  if (!(density.norm_const > 0.0))
    throw std::invalid_argument("make_test_density: density integrates to zero");
  density.envelope = grid_envelope(density);
  return density;
}

Sample rejection_sample(const TargetDensity& density, std::size_t n,
                        CounterRng& rng) {
  if (density.domain.dimension() != 2)
    throw DimensionMismatch("rejection_sample: requires a 2-D domain");
  const double envelope =
      density.envelope > 0.0 ? density.envelope : grid_envelope(density);
  const AxisBox& bb = density.domain.bounding_box();
  const double wx = bb.upper[0] - bb.lower[0];
  const double wy = bb.upper[1] - bb.lower[1];

  Sample sample = Sample::with_dimension(2);
  std::size_t proposals = 0;
  double p[2];
  while (sample.size() < n) {
    if (proposals == 1000000 && sample.size() == 0)
      throw EnvelopeFailure(
          "rejection_sample: nothing accepted in the first 1e6 proposals");
    if (proposals >= 1000000000ULL)
      throw EnvelopeFailure("rejection_sample: proposal budget (1e9) exhausted");
    ++proposals;
    p[0] = bb.lower[0] + wx * rng.next_double();
    p[1] = bb.lower[1] + wy * rng.next_double();
    const double u = rng.next_double();
    const double f = density.pdf(std::span<const double>(p, 2));
    if (f > 0.0 && u * envelope < f) sample.push_back(std::span<const double>(p, 2));
  }
  return sample;
}

Sample rejection_sample(const TargetDensity& density, std::size_t n,
                        std::uint64_t seed) {
  CounterRng rng(seed);
  return rejection_sample(density, n, rng);
}

std::vector<int> default_degree_grid() { return {0, 1, 2, 3, 4, 5}; }

std::vector<double> default_bandwidth_grid() {
  std::vector<double> h(600);
  for (int l = 0; l < 600; ++l) h[static_cast<std::size_t>(l)] = 0.01 + 0.001 * l;
  return h;
}

namespace {

void validate_study(const StudyConfig& cfg) {
  if (cfg.density.domain.dimension() != 2)
    throw DimensionMismatch("StudyConfig: requires a 2-D density");
  if (cfg.t.size() != 2) throw DimensionMismatch("StudyConfig: t must be 2-D");
  if (cfg.replications < 1)
    throw std::invalid_argument("StudyConfig: need R >= 1");
  for (double h : cfg.bandwidth_grid) {
    if (!(h > 0.0) || h > 1.0)
      throw std::invalid_argument("StudyConfig: bandwidths must lie in (0, 1]");
  }
}

std::uint64_t stream_index(std::size_t n, std::size_t rep) {
  return static_cast<std::uint64_t>(n) * 1000003ULL + rep;
}

EstimationContext study_context(const StudyConfig& cfg) {
  return EstimationContext(cfg.density.domain, cfg.t,
                           default_rho(cfg.density.domain));
}

}  // namespace

OracleResult oracle_search(const StudyConfig& cfg, std::size_t n) {
  validate_study(cfg);
  if (cfg.degree_grid.empty() || cfg.bandwidth_grid.empty())
    throw std::invalid_argument("oracle_search: empty parameter grid");
  const EstimationContext ctx = study_context(cfg);

  const std::size_t nm = cfg.degree_grid.size();
  const std::size_t nh = cfg.bandwidth_grid.size();
  const std::size_t cells = nm * nh;

  // Gram systems do not depend on the sample; build the whole grid once.
  // Cells with singular Grams stay missing.
  std::vector<GramSystem> grams(cells);
  std::vector<char> missing(cells, 0);
  parallel_for(cells, cfg.jobs, [&](std::size_t c) {
    const int m = cfg.degree_grid[c / nh];
    const double h = cfg.bandwidth_grid[c % nh];
    try {
      grams[c] = build_gram(ctx, Gamma{m, h}, cfg.quad);
    } catch (const SingularGram&) {
      missing[c] = 1;
    }
  });

  const double f_true = cfg.density.pdf(cfg.t);
  const std::size_t R = cfg.replications;

  // Replications are merged chunk by chunk in a fixed order so the result is
  // independent of the number of workers.
  const std::size_t chunks = std::min<std::size_t>(64, R);
  std::vector<std::vector<double>> sq_sum(chunks,
                                          std::vector<double>(cells, 0.0));
  std::vector<std::vector<double>> quad_sum(chunks,
                                            std::vector<double>(cells, 0.0));
  parallel_for(chunks, cfg.jobs, [&](std::size_t c) {
    const std::size_t lo = c * R / chunks;
    const std::size_t hi = (c + 1) * R / chunks;
    detail::Window2D win;
    for (std::size_t rep = lo; rep < hi; ++rep) {
      CounterRng rng = CounterRng::substream(cfg.seed, stream_index(n, rep));
      const Sample sample = rejection_sample(cfg.density, n, rng);
      for (std::size_t ih = 0; ih < nh; ++ih) {
        detail::collect_window_2d(ctx, cfg.bandwidth_grid[ih], sample, win);
        for (std::size_t im = 0; im < nm; ++im) {
          const std::size_t cell = im * nh + ih;
          if (missing[cell]) continue;
          const PointEstimate est =
              detail::estimate_from_window(grams[cell], win, n);
          const double err = est.f_hat - f_true;
          sq_sum[c][cell] += err * err;
          quad_sum[c][cell] += err * err * err * err;
        }
      }
    }
  });

  OracleResult result;
  result.n = n;
  result.f_true = f_true;
  result.table.resize(cells);
  bool have_best = false;
  double best_mse = std::numeric_limits<double>::infinity();
  for (std::size_t im = 0; im < nm; ++im) {
    for (std::size_t ih = 0; ih < nh; ++ih) {
      const std::size_t cell = im * nh + ih;
      OracleCell& out = result.table[cell];
      out.m = cfg.degree_grid[im];
      out.h = cfg.bandwidth_grid[ih];
      if (missing[cell]) {
        out.mse = std::numeric_limits<double>::quiet_NaN();
        out.se = std::numeric_limits<double>::quiet_NaN();
        out.n_fail = R;
        continue;
      }
      double s2 = 0.0, s4 = 0.0;
      for (std::size_t c = 0; c < chunks; ++c) {
        s2 += sq_sum[c][cell];
        s4 += quad_sum[c][cell];
      }
      const double Rd = static_cast<double>(R);
      out.mse = s2 / Rd;
      const double var = std::max(0.0, s4 / Rd - out.mse * out.mse);
      out.se = R > 1 ? std::sqrt(var / (Rd - 1.0)) : 0.0;
      out.n_fail = 0;
      const bool better =
          !have_best || out.mse < best_mse ||
          (out.mse == best_mse &&
           (out.m < result.m_star ||
            (out.m == result.m_star && out.h > result.h_star)));
      if (better) {
        have_best = true;
        best_mse = out.mse;
        result.m_star = out.m;
        result.h_star = out.h;
      }
    }
  }
  if (!have_best)
    throw SingularGram("oracle_search: every grid cell is missing");
  return result;
}

std::vector<AdaptiveRep> adaptive_replications(const StudyConfig& cfg,
                                               std::size_t n,
                                               const SelectionConfig& scfg) {
  validate_study(cfg);
  const EstimationContext ctx = study_context(cfg);
  std::vector<std::string> grid_warnings;
  const std::vector<GridEntry> grid =
      build_grid(ctx, n, scfg, grid_warnings);

  std::vector<AdaptiveRep> reps(cfg.replications);
  parallel_for(cfg.replications, cfg.jobs, [&](std::size_t rep) {
    CounterRng rng = CounterRng::substream(cfg.seed, stream_index(n, rep));
    const Sample sample = rejection_sample(cfg.density, n, rng);
    const SelectionReport report =
        detail::select_with_grid(ctx, sample, scfg, grid);
    AdaptiveRep& out = reps[rep];
    out.rep = rep;
    out.n = n;
    out.f_hat = report.f_hat_adaptive;
    for (const GridEntry& e : report.entries) {
      if (e.ell == report.selected_ell) {
        out.m_sel = e.gamma.m;
        out.h_sel = e.gamma.h;
      }
    }
  });
  return reps;
}

double rate_check(const StudyConfig& cfg, const SelectionConfig& scfg) {
  validate_study(cfg);
  const auto& sizes = cfg.sample_sizes;
  if (sizes.size() < 3)
    throw std::invalid_argument("rate_check: need at least 3 sample sizes");
  const auto [mn, mx] = std::minmax_element(sizes.begin(), sizes.end());
  if (static_cast<double>(*mx) < 10.0 * static_cast<double>(*mn))
    throw std::invalid_argument("rate_check: sample sizes must span a decade");

  const double f_true = cfg.density.pdf(cfg.t);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double c = static_cast<double>(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const auto reps = adaptive_replications(cfg, sizes[i], scfg);
    double sq = 0.0;
    for (const AdaptiveRep& r : reps) {
      const double err = r.f_hat - f_true;
      sq += err * err;
    }
    const double rmse = std::sqrt(sq / static_cast<double>(reps.size()));
    const double lx = std::log(static_cast<double>(sizes[i]));
    const double ly = std::log(std::max(rmse, 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (c * sxy - sx * sy) / (c * sxx - sx * sx);
}

}  // namespace lpdens
