#pragma once

// Model scattering problem: a short-range radial potential and an
// independent ODE oracle for its s-wave phase shift.

#include "kohnlab/errors.hpp"
#include "kohnlab/radial_grid.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace kohnlab {

enum class PotentialKind { Zero, Exponential, SquareWell };

std::string to_string(PotentialKind kind);
PotentialKind parse_potential_kind(const std::string& name);

struct PotentialSpec {
  PotentialKind kind = PotentialKind::Exponential;
  double strength = -3.0;  // V0
  double range = 1.0;      // r0

  static PotentialSpec zero() { return {PotentialKind::Zero, 0.0, 1.0}; }
  static PotentialSpec exponential(double v0, double r0) {
    return {PotentialKind::Exponential, v0, r0};
  }
  static PotentialSpec square_well(double v0, double r0) {
    return {PotentialKind::SquareWell, v0, r0};
  }

  void validate() const;

  /// Radii where V(r) is discontinuous; quadrature panels and oracle
  /// segments are aligned with them.
  std::vector<double> breakpoints() const;
};

template <class T>
T evaluate_potential(const PotentialSpec& spec, const T& r) {
  using std::exp;
  switch (spec.kind) {
    case PotentialKind::Zero:
      return T(0);
    case PotentialKind::Exponential:
      return T(spec.strength) * exp(-r / T(spec.range));
    case PotentialKind::SquareWell:
      return r < T(spec.range) ? T(spec.strength) : T(0);
  }
  return T(0);
}

/// Checks |V(r_max)| < 1e-12 and exp(-gamma r_max) < 1e-12.
void validate_grid(const RadialGrid& grid, const PotentialSpec& potential, double gamma);

struct OracleOptions {
  double step = 1e-4;
  /// Distance between the two matching points; 0 picks a quarter wavelength.
  double separation = 0.0;
};

/// s-wave phase shift from fixed-step RK4 integration of
/// -u''/2 + V u = (k^2/2) u, u(0) = 0, matched to A sin(kr + eta) at
/// r1 = grid.r_max and r2 = r1 + separation. Returns eta in (-pi/2, pi/2].
/// Throws NonConvergence when sin(k (r2 - r1)) is too small to match.
double oracle_phase_shift(const PotentialSpec& spec, double k, const RadialGrid& grid,
                          const OracleOptions& options = {});

/// Same integration with an explicit matching radius instead of a grid.
double oracle_phase_shift(const PotentialSpec& spec, double k, double r_match,
                          const OracleOptions& options = {});

}  // namespace kohnlab
