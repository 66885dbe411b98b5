#include "kohnlab/singularity_lab.hpp"

#include "kohnlab/errors.hpp"
#include "kohnlab/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace kohnlab {

namespace {

constexpr double kDegenerateRel = 1e-10;
constexpr int kProbes = 32;
constexpr std::array<double, 3> kDeltas{1e-2, 1e-3, 1e-4};
constexpr double kAccept = 1e-3;
constexpr double kReject = 1e-1;
// deviations below this are treated as equal when checking monotonic decay
constexpr double kNoise = 1e-12;

Real det_at(const ElementTable& table, const Real& tau) {
  return determinant<Real>(rotate_table(table, tau).a);
}

}  // namespace

Real QuadraticCoeffs::form(const Real& tau) const {
  const Real s = sin(tau);
  const Real co = cos(tau);
  return a * s * s + b * s * co + c * co * co;
}

bool QuadraticCoeffs::degenerate() const {
  const Real t = Real(kDegenerateRel) * scale;
  return abs(a) < t && abs(b) < t && abs(c) < t;
}

QuadraticCoeffs extract_coeffs(const ElementTable& table) {
  const Real pi = kPi<Real>;
  QuadraticCoeffs q;
  q.c = det_at(table, 0);
  q.a = det_at(table, pi / 2);
  q.b = 2 * det_at(table, pi / 4) - q.a - q.c;
  for (int i = 0; i < kProbes; ++i) {
    q.probe_max = std::max(q.probe_max, Real(abs(det_at(table, pi * i / kProbes))));
  }
  q.scale = std::max(q.probe_max, table.det_scale());
  return q;
}

RootSet singular_taus(const QuadraticCoeffs& q) {
  RootSet out;
  if (q.degenerate()) {
    out.degenerate = true;
    return out;
  }
  const Real pi = kPi<Real>;
  const Real lead_floor = Real(kDegenerateRel) * q.probe_max;
  auto add = [&](const Real& t) { out.real.push_back(wrap_tau<Real>(atan(t))); };

  if (abs(q.a) <= lead_floor) {
    out.real.push_back(pi / 2);
    // b t + c = 0 remains
    if (abs(q.b) > lead_floor) add(-q.c / q.b);
  } else {
    const Real disc = q.b * q.b - 4 * q.a * q.c;
    if (disc >= 0) {
      const Real root = sqrt(disc);
      const Real qq = -(q.b + (q.b >= 0 ? root : Real(-root))) / 2;
      if (qq == 0) {
        add(Real(0));
      } else {
        add(qq / q.a);
        if (disc > 0) add(q.c / qq);
      }
    } else {
      // arctan(x + iy) in closed form; tan tau = +-i gives |Im| = infinity
      const Real x = -q.b / (2 * q.a);
      const Real y = abs(sqrt(-disc) / (2 * q.a));
      const Real re = atan2(2 * x, 1 - x * x - y * y) / 2;
      const Real im = log(((1 + y) * (1 + y) + x * x) / ((1 - y) * (1 - y) + x * x)) / 4;
      ComplexRootPair pair;
      pair.re = to_double(wrap_tau<Real>(re));
      pair.im = std::abs(to_double(im));
      out.complex_pair = pair;
      if (pair.im < 0.1) {
        out.warnings.push_back("complex singular tau with |Im| < 0.1: near-real root lost");
      }
    }
  }
  std::sort(out.real.begin(), out.real.end());
  return out;
}

std::string to_string(RootClass cls) {
  switch (cls) {
    case RootClass::AnomalyFree:
      return "AnomalyFree";
    case RootClass::Schwartz:
      return "Schwartz";
    case RootClass::Undetermined:
      return "Undetermined";
  }
  return "Undetermined";
}

double anomaly_free_phase(const Real& tau_s, double c) {
  return to_double(wrap_phase<Real>(tau_s - Real(c) + kPi<Real> / 2));
}

Classification classify_root(const ElementTable& table, const Real& tau_s, double c) {
  Classification out;
  out.eta_hat = anomaly_free_phase(tau_s, c);
  if (extract_coeffs(table).degenerate()) return out;  // probes would only sample noise
  auto probe = [&](double delta, int side) {
    for (int step = 1; step <= 2; ++step) {
      try {
        const Real tau = wrap_tau<Real>(tau_s + Real(side * step * delta));
        const KohnSolution sol = solve_at(table, tau, c, false);
        return std::abs(phase_difference(sol.eta, out.eta_hat));
      } catch (const SingularMatrix&) {
      }
    }
    return std::numeric_limits<double>::quiet_NaN();
  };
  for (double d : kDeltas) {
    out.below.push_back(probe(d, -1));
    out.above.push_back(probe(d, +1));
  }

  auto decreasing = [](const std::vector<double>& dev) {
    for (std::size_t i = 1; i < dev.size(); ++i) {
      if (!(dev[i] <= dev[i - 1] + kNoise)) return false;
    }
    return true;
  };
  const double last_below = out.below.back();
  const double last_above = out.above.back();
  if (last_below > kReject || last_above > kReject) {
    out.cls = RootClass::Schwartz;
  } else if (decreasing(out.below) && decreasing(out.above) && last_below <= kAccept &&
             last_above <= kAccept) {
    out.cls = RootClass::AnomalyFree;
  } else {
    out.cls = RootClass::Undetermined;
  }
  return out;
}

std::vector<Real> tau_grid(int p) {
  if (p < 1) throw ValidationError("tau grid: p must be positive");
  std::vector<Real> out(p);
  for (int i = 0; i < p; ++i) out[i] = kPi<Real> * i / p;
  return out;
}

double median_of(std::vector<double> values) {
  if (values.empty()) throw InsufficientData("median of an empty set");
  const std::size_t mid = (values.size() - 1) / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  return values[mid];
}

AnomalyMeasure anomaly_measure(const ElementTable& table, const std::vector<Real>& taus, double c) {
  if (taus.size() < 3) throw ValidationError("anomaly measure: need at least 3 angles");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  AnomalyMeasure m;
  m.tau.reserve(taus.size());
  m.eta.reserve(taus.size());
  std::vector<double> good;
  for (const Real& tau : taus) {
    m.tau.push_back(to_double(tau));
    try {
      const double eta = solve_at(table, tau, c, false).eta;
      m.eta.push_back(eta);
      good.push_back(eta);
    } catch (const SingularMatrix&) {
      m.eta.push_back(nan);
    }
  }
  m.solved = good.size();
  if (2 * m.solved < taus.size()) {
    throw InsufficientData("anomaly measure: only " + std::to_string(m.solved) + " of " +
                           std::to_string(taus.size()) + " angles solvable");
  }
  m.median = median_of(good);
  m.delta.reserve(taus.size());
  bool found = false;
  for (std::size_t i = 0; i < m.eta.size(); ++i) {
    const double e = m.eta[i];
    m.delta.push_back(std::isnan(e) ? nan : std::abs(phase_difference(e, m.median)));
    if (!found && e == m.median) {
      m.median_index = i;
      found = true;
    }
  }
  return m;
}

SingularityReport analyze(const ElementTable& table, double c) {
  SingularityReport r;
  r.k = to_double(table.k);
  r.coeffs = extract_coeffs(table);
  r.roots = singular_taus(r.coeffs);
  r.degenerate = r.roots.degenerate;
  r.warnings = r.roots.warnings;
  if (r.degenerate) {
    r.warnings.push_back("determinant form vanishes identically; no phase shift is defined");
    return r;
  }
  for (const Real& tau : r.roots.real) {
    Classification cl = classify_root(table, tau, c);
    if (cl.cls == RootClass::AnomalyFree) {
      if (!r.tau_hat) {
        r.tau_hat = tau;
        r.eta_hat = cl.eta_hat;
      } else {
        r.warnings.push_back("more than one root classified AnomalyFree; using the first");
      }
    }
    r.classes.push_back(std::move(cl));
  }
  return r;
}

std::string to_string(Scheme scheme) {
  return scheme == Scheme::AnomalyFreeRoot ? "anomaly_free" : "median";
}

Scheme parse_scheme(const std::string& name) {
  if (name == "anomaly_free") return Scheme::AnomalyFreeRoot;
  if (name == "median") return Scheme::MedianPhase;
  throw ValidationError("unknown scheme '" + name + "' (expected anomaly_free or median)");
}

Optimum optimize_tau(const SingularityReport& report, const AnomalyMeasure* measure, Scheme scheme) {
  if (report.degenerate) {
    throw DegenerateSystem("optimize_tau: determinant form is degenerate at k = " +
                           std::to_string(report.k));
  }
  Optimum out;
  out.scheme = scheme;
  if (scheme == Scheme::AnomalyFreeRoot) {
    if (!report.tau_hat) {
      throw NoAnomalyFreeRoot("no AnomalyFree root at k = " + std::to_string(report.k));
    }
    out.tau = *report.tau_hat;
    out.eta = *report.eta_hat;
    return out;
  }
  if (measure == nullptr) throw ValidationError("optimize_tau: median scheme needs a measure");
  out.tau = measure->tau.empty() ? Real(0) : Real(measure->tau[measure->median_index]);
  out.eta = measure->median;
  return out;
}

}  // namespace kohnlab
