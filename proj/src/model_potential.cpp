#include "kohnlab/model_potential.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace kohnlab {

std::string to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::Zero:
      return "zero";
    case PotentialKind::Exponential:
      return "exponential";
    case PotentialKind::SquareWell:
      return "square_well";
  }
  return "unknown";
}

PotentialKind parse_potential_kind(const std::string& name) {
  if (name == "zero") return PotentialKind::Zero;
  if (name == "exponential") return PotentialKind::Exponential;
  if (name == "square_well") return PotentialKind::SquareWell;
  throw ValidationError("unknown potential kind '" + name + "'");
}

void PotentialSpec::validate() const {
  if (!std::isfinite(strength)) throw ValidationError("potential strength must be finite");
  if (kind != PotentialKind::Zero && !(range > 0 && std::isfinite(range))) {
    throw ValidationError("potential range must be positive");
  }
}

std::vector<double> PotentialSpec::breakpoints() const {
  if (kind == PotentialKind::SquareWell) return {range};
  return {};
}

void validate_grid(const RadialGrid& grid, const PotentialSpec& potential, double gamma) {
  const double r = grid.r_max();
  if (std::abs(evaluate_potential(potential, r)) >= 1e-12) {
    throw ValidationError("radial grid: |V(r_max)| must be below 1e-12; increase r_max");
  }
  if (!(std::exp(-gamma * r) < 1e-12)) {
    throw ValidationError("radial grid: exp(-gamma r_max) must be below 1e-12; increase r_max");
  }
}

namespace {

using State = std::array<double, 2>;  // u, u'

// r_hi is the segment end; V is taken from its left so a discontinuity there
// is not seen by the last stage of the segment.
State derivative(const PotentialSpec& spec, double k2, double r, double r_hi, const State& y) {
  const double v = evaluate_potential(spec, std::min(r, std::nextafter(r_hi, 0.0)));
  return {y[1], (2.0 * v - k2) * y[0]};
}

// Fixed-step RK4 over [a, b] with the step adjusted to land on b.
// The potential is smooth inside the segment.
State integrate_segment(const PotentialSpec& spec, double k2, double a, double b, double step,
                        State y) {
  const long n = std::max(1L, std::lround((b - a) / step));
  const double h = (b - a) / static_cast<double>(n);
  for (long i = 0; i < n; ++i) {
    const double r = a + h * static_cast<double>(i);
    const State k1 = derivative(spec, k2, r, b, y);
    const State k2s = derivative(spec, k2, r + h / 2, b, {y[0] + h / 2 * k1[0], y[1] + h / 2 * k1[1]});
    const State k3 = derivative(spec, k2, r + h / 2, b, {y[0] + h / 2 * k2s[0], y[1] + h / 2 * k2s[1]});
    const State k4 = derivative(spec, k2, r + h, b, {y[0] + h * k3[0], y[1] + h * k3[1]});
    y[0] += h / 6 * (k1[0] + 2 * k2s[0] + 2 * k3[0] + k4[0]);
    y[1] += h / 6 * (k1[1] + 2 * k2s[1] + 2 * k3[1] + k4[1]);
  }
  return y;
}

}  // namespace

double oracle_phase_shift(const PotentialSpec& spec, double k, const RadialGrid& grid,
                          const OracleOptions& options) {
  return oracle_phase_shift(spec, k, grid.r_max(), options);
}

double oracle_phase_shift(const PotentialSpec& spec, double k, double r_match,
                          const OracleOptions& options) {
  spec.validate();
  if (!(k > 0)) throw ValidationError("oracle: k must be positive");
  if (!(options.step > 0)) throw ValidationError("oracle: step must be positive");
  if (!(r_match > 0)) throw ValidationError("oracle: matching radius must be positive");

  // Both matching points sit on the step lattice.
  const double r1 = options.step * std::round(r_match / options.step);
  double separation = options.separation > 0 ? options.separation : std::numbers::pi / (2 * k);
  separation = options.step * std::max(1.0, std::round(separation / options.step));
  const double r2 = r1 + separation;
  if (std::abs(std::sin(k * separation)) < 1e-3) {
    throw NonConvergence("oracle: matching points are a multiple of pi/k apart");
  }

  std::vector<double> edges{0.0};
  for (double b : spec.breakpoints()) {
    if (b > 0 && b < r1) edges.push_back(b);
  }
  edges.push_back(r1);

  const double k2 = k * k;
  State y{0.0, 1.0};
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    y = integrate_segment(spec, k2, edges[i], edges[i + 1], options.step, y);
  }
  const double u1 = y[0];
  y = integrate_segment(spec, k2, r1, r2, options.step, y);
  const double u2 = y[0];

  // u = A sin(kr + eta) at both points.
  const double num = u1 * std::sin(k * r2) - u2 * std::sin(k * r1);
  const double den = u2 * std::cos(k * r1) - u1 * std::cos(k * r2);
  return wrap_phase(std::atan2(num, den));
}

}  // namespace kohnlab
