#include "lpdens/selection.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "lpdens/errors.hpp"

namespace lpdens {

namespace detail {
SelectionReport finish_selection(const EstimationContext& ctx,
                                 const Sample& sample,
                                 const SelectionConfig& cfg,
                                 SelectionReport report);
}  // namespace detail

namespace {

void validate_config(const SelectionConfig& cfg) {
  if (!(cfg.delta > 1.0))
    throw std::invalid_argument("SelectionConfig: delta must be > 1");
}

int degree_for_level(const SelectionConfig& cfg, std::size_t n, int ell,
                     int levels) {
  switch (cfg.m_rule) {
    case MRule::simple_domain:
      return static_cast<int>(std::floor(std::log(static_cast<double>(n)) /
                                         (2.0 * ell)));
    case MRule::zero:
      return 0;
    case MRule::custom: {
      if (static_cast<int>(cfg.custom_m.size()) < std::max(levels, ell))
        throw std::invalid_argument(
            "SelectionConfig: custom degree list shorter than the ladder");
      for (std::size_t i = 1; i < cfg.custom_m.size(); ++i) {
        if (cfg.custom_m[i] > cfg.custom_m[i - 1])
          throw std::invalid_argument(
              "SelectionConfig: custom degrees must be nonincreasing");
      }
      const int m = cfg.custom_m[static_cast<std::size_t>(ell - 1)];
      if (m < 0)
        throw std::invalid_argument("SelectionConfig: degrees must be >= 0");
      return m;
    }
  }
  return 0;
}

double ladder_rho(const EstimationContext& ctx, const SelectionConfig& cfg) {
  const double rho = cfg.rho > 0.0 ? cfg.rho : ctx.rho;
  if (rho > ctx.rho)
    throw std::invalid_argument("SelectionConfig: rho exceeds the context rho");
  return rho;
}

}  // namespace

std::vector<LadderRow> grid_ladder(const EstimationContext& ctx, std::size_t n,
                                   const SelectionConfig& cfg) {
  validate_config(cfg);
  if (n < 2) throw std::invalid_argument("grid_ladder: n must be >= 2");
  const double rho = ladder_rho(ctx, cfg);
  const int d = ctx.dimension();
  const double logn = std::log(static_cast<double>(n));
  const int levels = static_cast<int>(std::floor(logn));
  const double threshold = logn * logn * logn;

  std::vector<LadderRow> rows;
  for (int ell = 1; ell <= std::max(levels, 1); ++ell) {
    LadderRow row;
    row.ell = ell;
    row.h = rho * std::exp(-ell);
    row.m = degree_for_level(cfg, n, ell, levels);
    row.W_h = neighborhood_mass(ctx, row.h, cfg.quad);
    row.qualifies = ell <= levels &&
                    static_cast<double>(n) * std::pow(row.h, d) * row.W_h >=
                        threshold;
    try {
      const GramSystem sys = build_gram(ctx, Gamma{row.m, row.h}, cfg.quad);
      row.lambda = sys.lambda;
    } catch (const SingularGram&) {
      row.lambda = std::numeric_limits<double>::quiet_NaN();
      row.singular = true;
      row.qualifies = false;
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<GridEntry> build_grid(const EstimationContext& ctx, std::size_t n,
                                  const SelectionConfig& cfg,
                                  std::vector<std::string>& warnings) {
  validate_config(cfg);
  if (n < 2) throw std::invalid_argument("build_grid: n must be >= 2");
  const double rho = ladder_rho(ctx, cfg);
  const int d = ctx.dimension();
  const double logn = std::log(static_cast<double>(n));
  const int levels = static_cast<int>(std::floor(logn));
  const double threshold = logn * logn * logn;

  std::vector<GridEntry> entries;
  for (int ell = 1; ell <= levels; ++ell) {
    const double h = rho * std::exp(-ell);
    const int m = degree_for_level(cfg, n, ell, levels);
    const double W = neighborhood_mass(ctx, h, cfg.quad);
    if (static_cast<double>(n) * std::pow(h, d) * W < threshold) continue;
    GridEntry e;
    e.ell = ell;
    e.gamma = Gamma{m, h};
    e.W_h = W;
    try {
      e.gram = build_gram(ctx, e.gamma, cfg.quad);
    } catch (const SingularGram&) {
      warnings.push_back("dropped ell=" + std::to_string(ell) +
                         ": singular Gram matrix");
      continue;
    }
    entries.push_back(std::move(e));
  }

  if (entries.empty()) {
    if (!cfg.fallback_on_empty_grid)
      throw EmptyGrid("build_grid: no bandwidth level satisfies n h^d W_h >= (log n)^3");
    const int ell = 1;
    const double h = rho * std::exp(-ell);
    const int m = degree_for_level(cfg, n, ell, std::max(levels, 1));
    GridEntry e;
    e.ell = ell;
    e.gamma = Gamma{m, h};
    e.W_h = neighborhood_mass(ctx, h, cfg.quad);
    try {
      e.gram = build_gram(ctx, e.gamma, cfg.quad);
    } catch (const SingularGram&) {
      throw EmptyGrid("build_grid: empty grid and the fallback level is singular");
    }
    warnings.push_back(
        "grid condition n h^d W_h >= (log n)^3 excluded every level; "
        "falling back to ell=1");
    entries.push_back(std::move(e));
  }
  return entries;
}

Penalties penalties(const GramSystem& gram, std::size_t n, int d,
                    double delta) {
  if (!(delta > 1.0)) throw std::invalid_argument("penalties: delta must be > 1");
  if (n == 0) throw std::invalid_argument("penalties: n must be >= 1");
  const double D = static_cast<double>(gram.size());
  const double nhd = static_cast<double>(n) * std::pow(gram.gamma.h, d);
  Penalties p;
  p.c_gamma = std::sqrt(D) / (nhd * gram.lambda);
  p.eps_gamma = (delta - 1.0) * D * gram.W_h / (nhd * gram.lambda * gram.lambda);
  p.Lambda_gamma = 2.0 * std::abs(std::log(gram.lambda));
  p.pen = d * delta * std::abs(std::log(gram.gamma.h)) + p.Lambda_gamma;
  return p;
}

double u_hat(double v_hat, double eps_gamma, double c_gamma, double pen) {
  if (v_hat < 0.0 || eps_gamma < 0.0 || c_gamma < 0.0 || !(pen > 0.0))
    throw std::invalid_argument("u_hat: invalid arguments");
  return std::sqrt(2.0 * (v_hat + eps_gamma) * pen) + c_gamma * pen;
}

double a_hat(const std::vector<GridEntry>& entries, std::size_t target) {
  const GridEntry& e = entries[target];
  double best = 0.0;
  for (const GridEntry& other : entries) {
    // The larger of the two levels under the bandwidth order.
    const GridEntry& top = e.gamma.h >= other.gamma.h ? e : other;
    const double term =
        std::abs(top.f_hat - other.f_hat) - top.U_hat - other.U_hat;
    if (term > best) best = term;
  }
  return best;
}

SelectionReport select(const EstimationContext& ctx, const Sample& sample,
                       const SelectionConfig& cfg) {
  if (sample.size() == 0)
    throw std::invalid_argument("select: sample must be nonempty");
  SelectionReport report;
  report.entries = build_grid(ctx, sample.size(), cfg, report.warnings);
  return detail::finish_selection(ctx, sample, cfg, std::move(report));
}

namespace detail {

SelectionReport finish_selection(const EstimationContext& ctx,
                                 const Sample& sample,
                                 const SelectionConfig& cfg,
                                 SelectionReport report) {
  const int d = ctx.dimension();
  const std::size_t n = sample.size();

  for (GridEntry& e : report.entries) {
    const PointEstimate est = estimate_at(ctx, e.gram, sample);
    e.f_hat = est.f_hat;
    e.v_hat = est.v_hat;
    e.n_in_window = est.n_in_window;
    const Penalties p = penalties(e.gram, n, d, cfg.delta);
    e.c_gamma = p.c_gamma;
    e.eps_gamma = p.eps_gamma;
    e.Lambda_gamma = p.Lambda_gamma;
    e.pen = p.pen;
    e.U_hat = u_hat(e.v_hat, e.eps_gamma, e.c_gamma, e.pen);
  }
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    report.entries[i].A_hat = a_hat(report.entries, i);
  }

  std::size_t best = 0;
  double best_crit = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    const double crit = report.entries[i].A_hat + report.entries[i].U_hat;
    if (crit < best_crit) {
      best_crit = crit;
      best = i;
    }
  }
  report.selected_ell = report.entries[best].ell;
  report.f_hat_adaptive = report.entries[best].f_hat;
  return report;
}

SelectionReport select_with_grid(const EstimationContext& ctx,
                                 const Sample& sample,
                                 const SelectionConfig& cfg,
                                 const std::vector<GridEntry>& grid) {
  if (sample.size() == 0)
    throw std::invalid_argument("select_with_grid: sample must be nonempty");
  SelectionReport report;
  report.entries = grid;
  return finish_selection(ctx, sample, cfg, std::move(report));
}

}  // namespace detail

}  // namespace lpdens
