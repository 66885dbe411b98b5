#include "kohnlab/radial_grid.hpp"

#include "kohnlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kohnlab {

GaussRule gauss_legendre(int n) {
  if (n < 1) throw ValidationError("gauss_legendre: order must be >= 1");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const Real eps = std::numeric_limits<Real>::epsilon() * 4;
  const int m = (n + 1) / 2;
  for (int i = 1; i <= m; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    Real z = cos(kPi<Real> * (Real(i) - Real(0.25)) / (Real(n) + Real(0.5)));
    Real pp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      Real p1 = 1;
      Real p2 = 0;
      for (int j = 1; j <= n; ++j) {
        const Real p3 = p2;
        p2 = p1;
        p1 = ((2 * j - 1) * z * p2 - (j - 1) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1);
      const Real z1 = z;
      z = z1 - p1 / pp;
      if (abs(z - z1) <= eps) {
        // one more evaluation at the converged node for the weight
        p1 = 1;
        p2 = 0;
        for (int j = 1; j <= n; ++j) {
          const Real p3 = p2;
          p2 = p1;
          p1 = ((2 * j - 1) * z * p2 - (j - 1) * p3) / j;
        }
        pp = n * (z * p1 - p2) / (z * z - 1);
        break;
      }
    }
    rule.nodes[i - 1] = -z;
    rule.nodes[n - i] = z;
    rule.weights[i - 1] = 2 / ((1 - z * z) * pp * pp);
    rule.weights[n - i] = rule.weights[i - 1];
  }
  return rule;
}

RadialGrid RadialGrid::build(double r_max, int order, double panel_width,
                             const std::vector<double>& breakpoints) {
  if (!(r_max > 0)) throw ValidationError("radial grid: r_max must be positive");
  if (order < 2) throw ValidationError("radial grid: order must be >= 2");
  if (!(panel_width > 0)) throw ValidationError("radial grid: panel width must be positive");

  RadialGrid grid;
  grid.r_max_ = r_max;
  grid.order_ = order;
  grid.panel_width_ = panel_width;

  std::vector<double> edges{0.0, r_max};
  for (double b : breakpoints) {
    if (b > 0 && b < r_max) {
      edges.push_back(b);
      grid.breakpoints_.push_back(b);
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::sort(grid.breakpoints_.begin(), grid.breakpoints_.end());

  const GaussRule rule = gauss_legendre(order);
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    const Real lo = edges[s];
    const Real hi = edges[s + 1];
    const int panels = std::max(1, static_cast<int>(std::ceil((edges[s + 1] - edges[s]) / panel_width)));
    const Real width = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const Real a = lo + width * p;
      const Real half = width / 2;
      for (int q = 0; q < order; ++q) {
        grid.nodes_.push_back(a + half * (rule.nodes[q] + 1));
        grid.weights_.push_back(half * rule.weights[q]);
      }
    }
  }
  return grid;
}

RadialGrid RadialGrid::refined() const {
  return build(r_max_, 2 * order_, panel_width_, breakpoints_);
}

}  // namespace kohnlab
