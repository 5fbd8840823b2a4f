#include "lpdens/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lpdens/errors.hpp"
#include "lpdens/quadrature.hpp"

namespace lpdens {

bool AxisBox::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dimension())
    throw DimensionMismatch("AxisBox::contains: dimension mismatch");
  for (int j = 0; j < dimension(); ++j) {
    if (x[j] < lower[j] || x[j] > upper[j]) return false;
  }
  return true;
}

double AxisBox::shortest_side() const {
  double s = std::numeric_limits<double>::infinity();
  for (int j = 0; j < dimension(); ++j) s = std::min(s, upper[j] - lower[j]);
  return s;
}

bool BitRaster::contains(double x, double y) const {
  if (x < xmin || x > xmax || y < ymin || y > ymax) return false;
  const double dx = (xmax - xmin) / nx;
  const double dy = (ymax - ymin) / ny;
  int ix = std::min(nx - 1, static_cast<int>((x - xmin) / dx));
  int iy = std::min(ny - 1, static_cast<int>((y - ymin) / dy));
  ix = std::max(0, ix);
  iy = std::max(0, iy);
  return at(ix, iy);
}

namespace {

double edge_cross(const std::array<double, 2>& p, const std::array<double, 2>& q,
                  double x, double y) {
  return (q[0] - p[0]) * (y - p[1]) - (q[1] - p[1]) * (x - p[0]);
}

}  // namespace

Domain Domain::axis_box(std::vector<double> lower, std::vector<double> upper) {
  if (lower.empty() || lower.size() != upper.size())
    throw std::invalid_argument("axis_box: bounds must be nonempty and equal length");
  for (std::size_t j = 0; j < lower.size(); ++j) {
    if (!(lower[j] < upper[j]))
      throw std::invalid_argument("axis_box: lower must be < upper componentwise");
  }
  Domain d;
  d.kind_ = Kind::axis_box;
  d.d_ = static_cast<int>(lower.size());
  d.bbox_ = AxisBox{std::move(lower), std::move(upper)};
  return d;
}

Domain Domain::poly_sector(double k) {
  if (!(k >= 1.0)) throw std::invalid_argument("poly_sector: k must be >= 1");
  Domain d;
  d.kind_ = Kind::poly_sector;
  d.d_ = 2;
  d.k_ = k;
  d.bbox_ = AxisBox{{0.0, 0.0}, {1.0, 1.0}};
  return d;
}

Domain Domain::convex_polygon(std::vector<std::array<double, 2>> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) throw std::invalid_argument("convex_polygon: need >= 3 vertices");
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = vertices[i];
    const auto& q = vertices[(i + 1) % n];
    const auto& r = vertices[(i + 2) % n];
    if (edge_cross(p, q, r[0], r[1]) <= 0.0)
      throw std::invalid_argument(
          "convex_polygon: vertices must be counter-clockwise with no three collinear");
  }
  Domain d;
  d.kind_ = Kind::convex_polygon;
  d.d_ = 2;
  AxisBox box{{vertices[0][0], vertices[0][1]}, {vertices[0][0], vertices[0][1]}};
  for (const auto& v : vertices) {
    box.lower[0] = std::min(box.lower[0], v[0]);
    box.lower[1] = std::min(box.lower[1], v[1]);
    box.upper[0] = std::max(box.upper[0], v[0]);
    box.upper[1] = std::max(box.upper[1], v[1]);
  }
  d.bbox_ = std::move(box);
  d.verts_ = std::move(vertices);
  return d;
}

Domain Domain::implicit_raster(BitRaster raster) {
  if (raster.nx < 1 || raster.ny < 1 ||
      raster.bits.size() != static_cast<std::size_t>(raster.nx) * raster.ny)
    throw std::invalid_argument("implicit_raster: inconsistent grid");
  if (!(raster.xmin < raster.xmax) || !(raster.ymin < raster.ymax))
    throw std::invalid_argument("implicit_raster: empty bounding box");
  bool any = false;
  for (auto b : raster.bits) any = any || (b != 0);
  if (!any) throw std::invalid_argument("implicit_raster: empty domain");
  Domain d;
  d.kind_ = Kind::implicit_raster;
  d.d_ = 2;
  d.bbox_ = AxisBox{{raster.xmin, raster.ymin}, {raster.xmax, raster.ymax}};
  d.raster_ = std::move(raster);
  return d;
}

Domain Domain::implicit_fn(IndicatorFn indicator, AxisBox bbox) {
  if (!indicator) throw std::invalid_argument("implicit_fn: null indicator");
  if (bbox.dimension() < 1)
    throw std::invalid_argument("implicit_fn: bounding box required");
  for (int j = 0; j < bbox.dimension(); ++j) {
    if (!(bbox.lower[j] < bbox.upper[j]))
      throw std::invalid_argument("implicit_fn: empty bounding box");
  }
  Domain d;
  d.kind_ = Kind::implicit_fn;
  d.d_ = bbox.dimension();
  d.bbox_ = std::move(bbox);
  d.fn_ = std::move(indicator);
  return d;
}

bool Domain::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != d_)
    throw DimensionMismatch("Domain::contains: dimension mismatch");
  switch (kind_) {
    case Kind::axis_box:
      return bbox_.contains(x);
    case Kind::poly_sector:
      return x[0] >= 0.0 && x[0] <= 1.0 && x[1] >= 0.0 &&
             x[1] <= std::pow(x[0], k_);
    case Kind::convex_polygon: {
      const std::size_t n = verts_.size();
      for (std::size_t i = 0; i < n; ++i) {
        const auto& p = verts_[i];
        const auto& q = verts_[(i + 1) % n];
        const double scale =
            (std::abs(q[0] - p[0]) + std::abs(q[1] - p[1])) *
            (std::abs(x[0] - p[0]) + std::abs(x[1] - p[1]));
        if (edge_cross(p, q, x[0], x[1]) < -1e-12 * std::max(1.0, scale))
          return false;
      }
      return true;
    }
    case Kind::implicit_raster:
      return raster_.contains(x[0], x[1]);
    case Kind::implicit_fn:
      if (!bbox_.contains(x)) return false;
      return fn_(x);
  }
  return false;
}

void Domain::last_axis_sections(std::span<const double> x_prefix,
                                std::vector<std::pair<double, double>>& out) const {
  switch (kind_) {
    case Kind::axis_box: {
      const int last = d_ - 1;
      for (int j = 0; j < last; ++j) {
        if (x_prefix[j] < bbox_.lower[j] || x_prefix[j] > bbox_.upper[j]) return;
      }
      out.emplace_back(bbox_.lower[last], bbox_.upper[last]);
      return;
    }
    case Kind::poly_sector: {
      const double x = x_prefix[0];
      if (x < 0.0 || x > 1.0) return;
      out.emplace_back(0.0, std::pow(x, k_));
      return;
    }
    case Kind::convex_polygon: {
      const double x = x_prefix[0];
      double lo = std::numeric_limits<double>::infinity();
      double hi = -std::numeric_limits<double>::infinity();
      const std::size_t n = verts_.size();
      for (std::size_t i = 0; i < n; ++i) {
        const auto& p = verts_[i];
        const auto& q = verts_[(i + 1) % n];
        const double x0 = std::min(p[0], q[0]);
        const double x1 = std::max(p[0], q[0]);
        if (x < x0 || x > x1) continue;
        if (x1 == x0) {
          lo = std::min({lo, p[1], q[1]});
          hi = std::max({hi, p[1], q[1]});
        } else {
          const double y = p[1] + (q[1] - p[1]) * (x - p[0]) / (q[0] - p[0]);
          lo = std::min(lo, y);
          hi = std::max(hi, y);
        }
      }
      if (lo <= hi) out.emplace_back(lo, hi);
      return;
    }
    case Kind::implicit_raster: {
      const double x = x_prefix[0];
      if (x < raster_.xmin || x > raster_.xmax) return;
      const double dx = (raster_.xmax - raster_.xmin) / raster_.nx;
      const double dy = (raster_.ymax - raster_.ymin) / raster_.ny;
      int ix = std::min(raster_.nx - 1,
                        static_cast<int>((x - raster_.xmin) / dx));
      ix = std::max(0, ix);
      int iy = 0;
      while (iy < raster_.ny) {
        if (!raster_.at(ix, iy)) {
          ++iy;
          continue;
        }
        int je = iy;
        while (je < raster_.ny && raster_.at(ix, je)) ++je;
        out.emplace_back(raster_.ymin + iy * dy, raster_.ymin + je * dy);
        iy = je;
      }
      return;
    }
    case Kind::implicit_fn: {
      const int last = d_ - 1;
      out.emplace_back(bbox_.lower[last], bbox_.upper[last]);
      return;
    }
  }
}

void Domain::axis_breakpoints(int j, const AxisBox& box,
                              std::vector<double>& out) const {
  const double lo = box.lower[j];
  const double hi = box.upper[j];
  switch (kind_) {
    case Kind::axis_box:
    case Kind::implicit_fn:
      return;
    case Kind::poly_sector:
      if (j == 0) {
        // Where the curve y = x^k crosses the window's y-range the clipped
        // section length has a kink.
        for (double c : {box.lower[1], box.upper[1]}) {
          if (c <= 0.0) continue;
          const double x = std::pow(c, 1.0 / k_);
          if (x > lo && x < hi) out.push_back(x);
        }
      }
      return;
    case Kind::convex_polygon:
      if (j == 0) {
        for (const auto& v : verts_) {
          if (v[0] > lo && v[0] < hi) out.push_back(v[0]);
        }
      }
      return;
    case Kind::implicit_raster:
      if (j == 0) {
        const double dx = (raster_.xmax - raster_.xmin) / raster_.nx;
        for (int i = 1; i < raster_.nx; ++i) {
          const double x = raster_.xmin + i * dx;
          if (x > lo && x < hi) out.push_back(x);
        }
      }
      return;
  }
}

bool contains(const Domain& domain, std::span<const double> x) {
  return domain.contains(x);
}

EstimationContext::EstimationContext(Domain domain_in, std::vector<double> t_in,
                                     double rho_in)
    : domain(std::move(domain_in)), t(std::move(t_in)), rho(rho_in) {
  if (static_cast<int>(t.size()) != domain.dimension())
    throw DimensionMismatch("EstimationContext: t has wrong dimension");
  if (!(rho > 0.0) || rho > std::exp(-1.0))
    throw std::invalid_argument("EstimationContext: rho must be in (0, e^-1]");
  if (!domain.contains(t))
    throw std::invalid_argument("EstimationContext: t must lie in the domain");
  if (!(neighborhood_mass(*this, rho) > 0.0))
    throw std::invalid_argument(
        "EstimationContext: rho-neighborhood has zero mass");
}

double default_rho(const Domain& domain) {
  return std::min(std::exp(-1.0), 0.5 * domain.bounding_box().shortest_side());
}

double weight(const EstimationContext& ctx, double h,
              std::span<const double> u) {
  if (!(h > 0.0) || h > ctx.rho)
    throw std::invalid_argument("weight: need 0 < h <= rho");
  if (static_cast<int>(u.size()) != ctx.dimension())
    throw DimensionMismatch("weight: u has wrong dimension");
  const int d = ctx.dimension();
  std::vector<double> x(d);
  for (int j = 0; j < d; ++j) {
    if (std::abs(u[j]) > h) return 0.0;
    x[j] = ctx.t[j] + u[j];
  }
  if (!ctx.domain.contains(x)) return 0.0;
  return std::pow(h, -d);
}

namespace {

bool window_empty(const AxisBox& box) {
  for (int j = 0; j < box.dimension(); ++j) {
    if (!(box.lower[j] < box.upper[j])) return true;
  }
  return false;
}

bool is_origin(std::span<const double> t) {
  for (double v : t) {
    if (v != 0.0) return false;
  }
  return true;
}

void check_h(double h, const char* who) {
  if (!(h > 0.0)) throw std::invalid_argument(std::string(who) + ": h must be > 0");
}

}  // namespace

namespace detail {

AxisBox window_box(const EstimationContext& ctx, double h) {
  const int d = ctx.dimension();
  const AxisBox& bb = ctx.domain.bounding_box();
  AxisBox box{std::vector<double>(d), std::vector<double>(d)};
  for (int j = 0; j < d; ++j) {
    box.lower[j] = std::max(ctx.t[j] - h, bb.lower[j]);
    box.upper[j] = std::min(ctx.t[j] + h, bb.upper[j]);
  }
  return box;
}

double integrate_window(const EstimationContext& ctx, double h,
                        const std::function<double(std::span<const double>)>& g,
                        const QuadratureParams& params) {
  check_h(h, "integrate_window");
  const int d = ctx.dimension();
  const AxisBox box = window_box(ctx, h);
  if (window_empty(box)) return 0.0;
  std::vector<double> u(d);
  const auto g_shifted = [&](std::span<const double> x) {
    for (int j = 0; j < d; ++j) u[j] = x[j] - ctx.t[j];
    return g(u);
  };
  return integrate_over_box(ctx.domain, box, g_shifted, params) *
         std::pow(h, -d);
}

double window_mass(const EstimationContext& ctx, double h,
                   const QuadratureParams& params) {
  check_h(h, "window_mass");
  const int d = ctx.dimension();
  switch (ctx.domain.kind()) {
    case Domain::Kind::axis_box: {
      const AxisBox& bb = ctx.domain.bounding_box();
      double mass = 1.0;
      for (int j = 0; j < d; ++j) {
        const double len = std::min(bb.upper[j] - ctx.t[j], h) -
                           std::max(bb.lower[j] - ctx.t[j], -h);
        mass *= std::max(0.0, len) / h;
      }
      return mass;
    }
    case Domain::Kind::poly_sector:
      if (is_origin(ctx.t) && h <= 1.0) {
        const double k = ctx.domain.sector_exponent();
        return std::pow(h, k - 1.0) / (k + 1.0);
      }
      break;
    default:
      break;
  }
  const AxisBox box = window_box(ctx, h);
  if (window_empty(box)) return 0.0;
  const double raw = integrate_over_box(
      ctx.domain, box, [](std::span<const double>) { return 1.0; }, params);
  return std::max(0.0, raw * std::pow(h, -d));
}

}  // namespace detail

double neighborhood_mass_quadrature(const EstimationContext& ctx, double h,
                                    const QuadratureParams& params) {
  check_h(h, "neighborhood_mass_quadrature");
  const AxisBox box = detail::window_box(ctx, h);
  if (window_empty(box)) return 0.0;
  const double raw = integrate_over_box(
      ctx.domain, box, [](std::span<const double>) { return 1.0; }, params);
  return std::max(0.0, raw * std::pow(h, -ctx.dimension()));
}

double neighborhood_mass(const EstimationContext& ctx, double h,
                         const QuadratureParams& params) {
  if (!(h > 0.0) || h > ctx.rho)
    throw std::invalid_argument("neighborhood_mass: need 0 < h <= rho");
  return detail::window_mass(ctx, h, params);
}

double integrate_weighted(const EstimationContext& ctx, double h,
                          const std::function<double(std::span<const double>)>& g,
                          const QuadratureParams& params) {
  if (!(h > 0.0) || h > ctx.rho)
    throw std::invalid_argument("integrate_weighted: need 0 < h <= rho");
  return detail::integrate_window(ctx, h, g, params);
}

double sector_gram_entry(double k, double h, const MultiIndex& alpha,
                         const MultiIndex& beta) {
  if (alpha.entries.size() != 2 || beta.entries.size() != 2)
    throw DimensionMismatch("sector_gram_entry: requires d = 2 indices");
  if (!(k >= 1.0)) throw std::invalid_argument("sector_gram_entry: k must be >= 1");
  if (!(h > 0.0) || h > 1.0)
    throw std::invalid_argument("sector_gram_entry: need 0 < h <= 1");
  const double a = alpha.entries[1] + beta.entries[1] + 1.0;
  const double b = alpha.entries[0] + beta.entries[0] + k * a + 1.0;
  return std::pow(h, (k - 1.0) * a) / (a * b);
}

}  // namespace lpdens
