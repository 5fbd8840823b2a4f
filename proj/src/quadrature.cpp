#include "lpdens/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "lpdens/errors.hpp"

namespace lpdens {

namespace {

// Gauss-Legendre order 8 on [-1, 1].
constexpr double kGlNodes[4] = {
    0.18343464249564980, 0.52553240991632899,
    0.79666647741362674, 0.96028985649753623};
constexpr double kGlWeights[4] = {
    0.36268378337836198, 0.31370664587788729,
    0.22238103445337447, 0.10122853629037626};

template <class F>
double gl8(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double r = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    s += kGlWeights[i] * (f(c + r * kGlNodes[i]) + f(c - r * kGlNodes[i]));
  }
  return s * r;
}

struct Node {
  double est;
  double a, b;
  double whole;    // GL8 on [a, b]
  double refined;  // GL8 on the two halves
  double vl, vr;
  int depth;
};

struct NodeLess {
  bool operator()(const Node& x, const Node& y) const {
    if (x.est != y.est) return x.est > y.est;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  }
};

//! Globally adaptive 1-D integration over a list of initial segments.
//! Refines the largest-error interval first; each interval's error is the
//! difference between its one-panel and two-panel Gauss-Legendre values.
class AdaptiveIntegrator1D {
 public:
  AdaptiveIntegrator1D(std::function<double(double)> f,
                       const QuadratureParams& params)
      : f_(std::move(f)), params_(params) {}

  double run(const std::vector<std::pair<double, double>>& segments) {
    std::multiset<Node, NodeLess> queue;
    double total = 0.0;
    double err = 0.0;
    for (const auto& [a, b] : segments) {
      if (!(b > a)) continue;
      Node n = make(a, b, 0, gl8(f_, a, b));
      total += n.refined;
      err += n.est;
      queue.insert(n);
    }
    if (queue.empty()) return 0.0;

    int iterations = 0;
    while (true) {
      const double tol =
          std::max(params_.rel_tol * std::abs(total), params_.abs_tol);
      if (err <= tol) return total;
      if (++iterations > kMaxRefinements)
        throw QuadratureFailure("adaptive quadrature: refinement budget exhausted");
      auto it = queue.begin();
      while (it != queue.end() && it->depth >= params_.max_depth) ++it;
      if (it == queue.end() || it->est <= 0.0)
        throw QuadratureFailure(
            "adaptive quadrature: depth limit reached before tolerance");
      const Node n = *it;
      queue.erase(it);
      total -= n.refined;
      err -= n.est;
      const double m = 0.5 * (n.a + n.b);
      Node left = make(n.a, m, n.depth + 1, n.vl);
      Node right = make(m, n.b, n.depth + 1, n.vr);
      total += left.refined + right.refined;
      err += left.est + right.est;
      queue.insert(left);
      queue.insert(right);
    }
  }

 private:
  static constexpr int kMaxRefinements = 20000;

  Node make(double a, double b, int depth, double whole) const {
    const double m = 0.5 * (a + b);
    const double vl = gl8(f_, a, m);
    const double vr = gl8(f_, m, b);
    const double refined = vl + vr;
    return Node{std::abs(whole - refined), a, b, whole, refined, vl, vr, depth};
  }

  std::function<double(double)> f_;
  QuadratureParams params_;
};

double integrate_segments(const std::function<double(double)>& f,
                          const std::vector<std::pair<double, double>>& segments,
                          const QuadratureParams& params) {
  AdaptiveIntegrator1D integ(f, params);
  return integ.run(segments);
}

//! Nested per-axis integration of g over domain intersected with box.
class BoxIntegrator {
 public:
  BoxIntegrator(const Domain& domain, const AxisBox& box, const PointFn& g,
                const QuadratureParams& params)
      : domain_(domain), box_(box), g_(g), d_(domain.dimension()), x_(d_) {
    // Inner axes run at tighter tolerances so their noise does not stall the
    // outer error estimates. Black-box indicators cap the innermost accuracy
    // at roughly 2^-max_depth per jump, so there the requested tolerance is
    // kept as is.
    axis_params_.assign(d_, params);
    double factor = 1.0;
    for (int j = 1; j < d_; ++j) {
      if (j == d_ - 1 && !domain.exact_sections()) break;
      factor *= 0.05;
      axis_params_[j].rel_tol = params.rel_tol * factor;
      axis_params_[j].abs_tol = params.abs_tol * factor;
    }
  }

  double run() { return integrate_axis(0); }

 private:
  double integrate_axis(int j) {
    if (j == d_ - 1) return innermost();
    const double lo = box_.lower[j];
    const double hi = box_.upper[j];
    if (!(lo < hi)) return 0.0;
    std::vector<double> cuts;
    cuts.push_back(lo);
    domain_.axis_breakpoints(j, box_, cuts);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    std::vector<std::pair<double, double>> segments;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (cuts[i + 1] > cuts[i]) segments.emplace_back(cuts[i], cuts[i + 1]);
    }
    const auto f = [this, j](double xj) {
      x_[j] = xj;
      return integrate_axis(j + 1);
    };
    return integrate_segments(f, segments, axis_params_[j]);
  }

  double innermost() {
    const int last = d_ - 1;
    sections_.clear();
    domain_.last_axis_sections(std::span<const double>(x_.data(), last),
                               sections_);
    if (sections_.empty()) return 0.0;
    std::vector<std::pair<double, double>> clipped;
    for (auto [lo, hi] : sections_) {
      lo = std::max(lo, box_.lower[last]);
      hi = std::min(hi, box_.upper[last]);
      if (hi > lo) clipped.emplace_back(lo, hi);
    }
    if (clipped.empty()) return 0.0;
    if (domain_.exact_sections()) {
      const auto f = [this, last](double xd) {
        x_[last] = xd;
        return g_(x_);
      };
      return integrate_segments(f, clipped, axis_params_[last]);
    }
    // Black-box indicator: membership goes into the integrand and the
    // adaptive bisection isolates the jumps.
    const auto f = [this, last](double xd) {
      x_[last] = xd;
      if (!domain_.contains(x_)) return 0.0;
      return g_(x_);
    };
    return integrate_segments(f, clipped, axis_params_[last]);
  }

  const Domain& domain_;
  const AxisBox& box_;
  const PointFn& g_;
  int d_;
  mutable std::vector<double> x_;
  std::vector<QuadratureParams> axis_params_;
  std::vector<std::pair<double, double>> sections_;
};

}  // namespace

double integrate_over_box(const Domain& domain, const AxisBox& box,
                          const PointFn& g, const QuadratureParams& params) {
  if (box.dimension() != domain.dimension())
    throw DimensionMismatch("integrate_over_box: box dimension mismatch");
  const AxisBox& bb = domain.bounding_box();
  AxisBox clipped{box.lower, box.upper};
  for (int j = 0; j < domain.dimension(); ++j) {
    clipped.lower[j] = std::max(box.lower[j], bb.lower[j]);
    clipped.upper[j] = std::min(box.upper[j], bb.upper[j]);
    if (!(clipped.lower[j] < clipped.upper[j])) return 0.0;
  }
  if (domain.dimension() == 1) {
    // Single axis: sections are intervals of the (1-D) domain.
    std::vector<std::pair<double, double>> sections;
    domain.last_axis_sections({}, sections);
    std::vector<std::pair<double, double>> segs;
    for (auto [lo, hi] : sections) {
      lo = std::max(lo, clipped.lower[0]);
      hi = std::min(hi, clipped.upper[0]);
      if (hi > lo) segs.emplace_back(lo, hi);
    }
    double x = 0.0;
    const auto f = [&](double x0) {
      x = x0;
      if (!domain.exact_sections() &&
          !domain.contains(std::span<const double>(&x, 1)))
        return 0.0;
      return g(std::span<const double>(&x, 1));
    };
    return integrate_segments(f, segs, params);
  }
  BoxIntegrator integ(domain, clipped, g, params);
  return integ.run();
}

double integrate_domain(const Domain& domain, const PointFn& g,
                        const QuadratureParams& params) {
  return integrate_over_box(domain, domain.bounding_box(), g, params);
}

double adaptive_gl_1d(const std::function<double(double)>& f, double a,
                      double b, const QuadratureParams& params) {
  return integrate_segments(f, {{a, b}}, params);
}

}  // namespace lpdens
