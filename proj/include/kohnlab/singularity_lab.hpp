#pragma once

// Quadratic form of det A(tau), singular tau values, their classification,
// the median-phase anomaly measure and the two tau-optimization schemes.

#include "kohnlab/kohn_engine.hpp"
#include "kohnlab/numeric.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kohnlab {

/// det A(tau) = a sin^2 tau + b sin tau cos tau + c cos^2 tau
struct QuadraticCoeffs {
  Real a = 0;
  Real b = 0;
  Real c = 0;
  /// Degeneracy anchor: max of the largest |det A| over 32 probe angles and
  /// table.det_scale().
  Real scale = 0;
  /// Largest |det A| over the probe angles alone.
  Real probe_max = 0;

  Real form(const Real& tau) const;
  /// Degenerate when |a|, |b|, |c| all fall below 1e-10 * scale.
  bool degenerate() const;
};

QuadraticCoeffs extract_coeffs(const ElementTable& table);

struct ComplexRootPair {
  double re = 0;  // wrapped to [0, pi)
  double im = 0;  // >= 0; the pair is re +- i im
};

struct RootSet {
  std::vector<Real> real;  // ascending in [0, pi)
  std::optional<ComplexRootPair> complex_pair;
  bool degenerate = false;
  std::vector<std::string> warnings;
};

/// Roots of a t^2 + b t + c = 0 in t = tan tau. |a| at or below
/// 1e-10 * probe_max puts a root at pi/2 plus the root of the remaining
/// linear equation.
RootSet singular_taus(const QuadraticCoeffs& coeffs);

enum class RootClass { AnomalyFree, Schwartz, Undetermined };
std::string to_string(RootClass cls);

struct Classification {
  RootClass cls = RootClass::Undetermined;
  double eta_hat = 0;  // wrap(tau_s - c + pi/2)
  /// |eta_v(tau_s -+ delta) - eta_hat| mod pi for delta = 1e-2, 1e-3, 1e-4.
  std::vector<double> below;
  std::vector<double> above;
};

/// Probes eta_v at tau_s +- delta. A probe that hits a singular matrix is
/// moved one more delta away from the root. Undetermined without probing
/// when the table's determinant form is degenerate.
Classification classify_root(const ElementTable& table, const Real& tau_s, double c);

/// eta_hat for a root: tau_s - c + pi/2 wrapped to (-pi/2, pi/2].
double anomaly_free_phase(const Real& tau_s, double c);

/// p equidistant angles i pi / p, i = 0..p-1.
std::vector<Real> tau_grid(int p);

struct AnomalyMeasure {
  std::vector<double> tau;
  std::vector<double> eta;    // NaN where the solve failed
  std::vector<double> delta;  // |eta - median| mod pi, NaN where failed
  double median = 0;          // lower median of the solved values
  std::size_t median_index = 0;
  std::size_t solved = 0;
};

/// Throws InsufficientData when fewer than half of the angles solve.
AnomalyMeasure anomaly_measure(const ElementTable& table, const std::vector<Real>& taus, double c);

double median_of(std::vector<double> values);

struct SingularityReport {
  double k = 0;
  QuadraticCoeffs coeffs;
  RootSet roots;
  std::vector<Classification> classes;  // one per real root
  std::optional<Real> tau_hat;          // first AnomalyFree root
  std::optional<double> eta_hat;
  bool degenerate = false;
  std::vector<std::string> warnings;
};

/// Coefficients, roots and classification for one table. Classification is
/// skipped when the form is degenerate.
SingularityReport analyze(const ElementTable& table, double c);

enum class Scheme { AnomalyFreeRoot, MedianPhase };
std::string to_string(Scheme scheme);
Scheme parse_scheme(const std::string& name);

struct Optimum {
  Scheme scheme = Scheme::MedianPhase;
  Real tau = 0;
  double eta = 0;
};

/// AnomalyFreeRoot returns (tau_hat, eta_hat) and throws NoAnomalyFreeRoot
/// when there is none. MedianPhase returns the first grid angle whose phase
/// is the median. Both throw DegenerateSystem on a degenerate report.
Optimum optimize_tau(const SingularityReport& report, const AnomalyMeasure* measure, Scheme scheme);

}  // namespace kohnlab
