#pragma once

#include "kohnlab/numeric.hpp"

#include <vector>

namespace kohnlab {

struct GaussRule {
  std::vector<Real> nodes;  // ascending in (-1, 1)
  std::vector<Real> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1], Newton-refined to full Real precision.
GaussRule gauss_legendre(int n);

/// Composite Gauss-Legendre rule on (0, r_max].
///
/// The interval is split at every breakpoint and each segment into panels no
/// wider than panel_width, with `order` nodes per panel.
class RadialGrid {
 public:
  static constexpr double kDefaultRMax = 100.0;
  static constexpr int kDefaultOrder = 24;
  static constexpr double kDefaultPanelWidth = 2.0;

  static RadialGrid build(double r_max = kDefaultRMax, int order = kDefaultOrder,
                          double panel_width = kDefaultPanelWidth,
                          const std::vector<double>& breakpoints = {});

  /// Same panels with twice the nodes per panel.
  RadialGrid refined() const;

  double r_max() const { return r_max_; }
  int order() const { return order_; }
  double panel_width() const { return panel_width_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<Real>& nodes() const { return nodes_; }
  const std::vector<Real>& weights() const { return weights_; }
  std::size_t size() const { return nodes_.size(); }

 private:
  double r_max_ = 0;
  int order_ = 0;
  double panel_width_ = 0;
  std::vector<double> breakpoints_;
  std::vector<Real> nodes_;
  std::vector<Real> weights_;
};

}  // namespace kohnlab
