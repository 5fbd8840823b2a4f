#pragma once

#include <functional>
#include <span>

#include "lpdens/domain.hpp"

namespace lpdens {

using PointFn = std::function<double(std::span<const double>)>;

//! integral of g over D intersected with an axis-aligned box, by nested
//! per-axis adaptive Gauss-Legendre (order 8). The innermost axis integrates
//! over exact domain cross-sections when available; outer axes are pre-split
//! at known geometry breakpoints. Throws QuadratureFailure when the
//! requested tolerance cannot be met within the per-axis depth limit.
double integrate_over_box(const Domain& domain, const AxisBox& box,
                          const PointFn& g, const QuadratureParams& params);

//! integral of g over the whole domain (its bounding box).
double integrate_domain(const Domain& domain, const PointFn& g,
                        const QuadratureParams& params = {});

//! Adaptive 1-D Gauss-Legendre on [a, b]; exposed for tests.
double adaptive_gl_1d(const std::function<double(double)>& f, double a,
                      double b, const QuadratureParams& params);

}  // namespace lpdens
