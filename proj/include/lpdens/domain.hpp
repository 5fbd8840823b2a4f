#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lpdens/multi_index.hpp"

namespace lpdens {

struct AxisBox {
  std::vector<double> lower;
  std::vector<double> upper;

  int dimension() const { return static_cast<int>(lower.size()); }
  bool contains(std::span<const double> x) const;
  double shortest_side() const;
};

//! Rasterized indicator on a 2-D bounding box; the domain is the union of the
//! filled grid cells. bits is row-major with row 0 at ymin.
struct BitRaster {
  int nx = 0;
  int ny = 0;
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  std::vector<std::uint8_t> bits;

  bool at(int ix, int iy) const {
    return bits[static_cast<std::size_t>(iy) * nx + ix] != 0;
  }
  bool contains(double x, double y) const;
};

using IndicatorFn = std::function<bool(std::span<const double>)>;

//! Geometric support of the density: a closed set with a deterministic
//! membership test, a bounding box, and (for all but black-box indicators)
//! exact cross-sections used by the integration engine.
class Domain {
 public:
  enum class Kind {
    axis_box,
    poly_sector,
    convex_polygon,
    implicit_raster,
    implicit_fn,
  };

  static Domain axis_box(std::vector<double> lower, std::vector<double> upper);
  //! {(x, y) : 0 <= x <= 1, 0 <= y <= x^k}. Accepts k >= 1; k = 1 is the
  //! linear sector (a triangle).
  static Domain poly_sector(double k);
  //! Vertices in counter-clockwise order, no three collinear.
  static Domain convex_polygon(std::vector<std::array<double, 2>> vertices);
  static Domain implicit_raster(BitRaster raster);
  static Domain implicit_fn(IndicatorFn indicator, AxisBox bbox);

  Kind kind() const { return kind_; }
  int dimension() const { return d_; }
  const AxisBox& bounding_box() const { return bbox_; }
  double sector_exponent() const { return k_; }
  const std::vector<std::array<double, 2>>& vertices() const { return verts_; }
  const BitRaster& raster() const { return raster_; }

  //! Membership test; boundary points count as inside. Pure and
  //! deterministic.
  bool contains(std::span<const double> x) const;

  // Geometry services for the integration engine (absolute coordinates).

  //! True when last_axis_sections is exact (everything but implicit_fn).
  bool exact_sections() const { return kind_ != Kind::implicit_fn; }
  //! Cross-section {x_d : (x_prefix, x_d) in D} as disjoint increasing
  //! intervals appended to out. For implicit_fn returns the bounding slab.
  void last_axis_sections(std::span<const double> x_prefix,
                          std::vector<std::pair<double, double>>& out) const;
  //! Points along axis j where the section geometry, clipped to the given
  //! box, has kinks or jumps; restricted to the open interval
  //! (box.lower[j], box.upper[j]). Used to pre-split outer integrals.
  void axis_breakpoints(int j, const AxisBox& box,
                        std::vector<double>& out) const;

 private:
  Domain() = default;

  Kind kind_ = Kind::axis_box;
  int d_ = 0;
  AxisBox bbox_;
  double k_ = 0;
  std::vector<std::array<double, 2>> verts_;
  BitRaster raster_;
  IndicatorFn fn_;
};

bool contains(const Domain& domain, std::span<const double> x);

//! Point of estimation inside a domain together with the largest scale rho.
struct EstimationContext {
  Domain domain;
  std::vector<double> t;
  double rho;

  //! Validates t in D, rho in (0, e^-1], and that the rho-neighborhood has
  //! positive mass.
  EstimationContext(Domain domain, std::vector<double> t, double rho);

  int dimension() const { return domain.dimension(); }
};

//! min(e^-1, half the shortest bounding-box side).
double default_rho(const Domain& domain);

struct QuadratureParams {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_depth = 14;
};

//! w_h(u): h^-d if ||u||_inf <= h and t + u in D, else 0. Requires
//! 0 < h <= rho.
double weight(const EstimationContext& ctx, double h,
              std::span<const double> u);

//! W_h = integral of w_h. Closed form for boxes and for sectors at the
//! origin, adaptive quadrature otherwise. Requires 0 < h <= rho.
double neighborhood_mass(const EstimationContext& ctx, double h,
                         const QuadratureParams& params = {});

//! As neighborhood_mass but always through the quadrature engine, and not
//! tied to rho; used to validate the engine against closed forms.
double neighborhood_mass_quadrature(const EstimationContext& ctx, double h,
                                    const QuadratureParams& params = {});

//! integral of g(u) w_h(u) du over the h-neighborhood, by adaptive
//! Gauss-Legendre. Requires 0 < h <= rho.
double integrate_weighted(const EstimationContext& ctx, double h,
                          const std::function<double(std::span<const double>)>& g,
                          const QuadratureParams& params = {});

//! Exact Gram entry for the sector domain at the origin:
//! c_k(a, b) * h^((k-1)(a2+b2+1)) with
//! c_k(a, b) = 1 / ((a2+b2+1) * (a1+b1 + k(a2+b2+1) + 1)).
double sector_gram_entry(double k, double h, const MultiIndex& alpha,
                         const MultiIndex& beta);

namespace detail {

//! t + [-h, h]^d clipped to the bounding box.
AxisBox window_box(const EstimationContext& ctx, double h);

//! As integrate_weighted but without the h <= rho gate; fixed-gamma
//! estimation may use any h in (0, 1].
double integrate_window(const EstimationContext& ctx, double h,
                        const std::function<double(std::span<const double>)>& g,
                        const QuadratureParams& params);

//! As neighborhood_mass but without the h <= rho gate.
double window_mass(const EstimationContext& ctx, double h,
                   const QuadratureParams& params);

}  // namespace detail

}  // namespace lpdens
