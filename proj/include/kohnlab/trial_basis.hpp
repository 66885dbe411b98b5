#pragma once

// Open-channel functions S and C, their tau rotation, the shielded function
// chi_0 and the short-range correlation family chi_1..chi_M.
//
// All evaluators are templates so the assembly can run them in Real while
// tests and tools use double. The free residuals apply the free operator
// (-1/2 d^2/dr^2 - k^2/2) in closed form; the potential term is added by the
// caller.

#include "kohnlab/errors.hpp"
#include "kohnlab/numeric.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace kohnlab {

struct BasisSpec {
  double gamma = 0.75;  // shielding
  double c = 0.0;       // asymptotic phase offset
  double alpha = 0.6;
  double beta = 1.0;
  int m1 = 6;  // functions r^i exp(-alpha r)
  int m2 = 6;  // functions r^i exp(-beta r)
  double norm = 1.0;

  int size() const { return m1 + m2; }
  void validate() const;
};

template <class T>
T eval_S(const BasisSpec& spec, const T& k, const T& r) {
  using std::sin;
  return T(spec.norm) * sin(k * r);
}

template <class T>
T eval_C(const BasisSpec& spec, const T& k, const T& r) {
  using std::cos;
  using std::exp;
  return T(spec.norm) * cos(k * r) * (1 - exp(-T(spec.gamma) * r));
}

template <class T>
T eval_chi0(const BasisSpec& spec, const T& k, const T& r) {
  using std::exp;
  return eval_C(spec, k, r) * exp(-T(spec.gamma) * r);
}

/// chi_i for i in 1..M: r^i e^{-alpha r} for i <= m1, r^{i-m1} e^{-beta r} after.
template <class T>
T eval_chi(const BasisSpec& spec, int i, const T& r) {
  using std::exp;
  if (i < 1 || i > spec.size()) {
    throw IndexOutOfRange("eval_chi: index " + std::to_string(i) + " outside 1.." +
                          std::to_string(spec.size()));
  }
  const bool first = i <= spec.m1;
  const int power = first ? i : i - spec.m1;
  const T a = T(first ? spec.alpha : spec.beta);
  T p = 1;
  for (int n = 0; n < power; ++n) p *= r;
  return p * exp(-a * r);
}

/// [S̄; C̄] = [[cos tau, sin tau], [-sin tau, cos tau]] [S; C].
template <class T>
std::pair<T, T> rotate_pair(const T& s, const T& c, const T& tau) {
  using std::cos;
  using std::sin;
  const T ct = cos(tau);
  const T st = sin(tau);
  return {ct * s + st * c, -st * s + ct * c};
}

// (-1/2 d^2/dr^2 - k^2/2) C
template <class T>
T free_residual_C(const BasisSpec& spec, const T& k, const T& r) {
  using std::cos;
  using std::exp;
  using std::sin;
  const T g = T(spec.gamma);
  return T(spec.norm) * exp(-g * r) * (k * g * sin(k * r) + g * g / 2 * cos(k * r));
}

// (-1/2 d^2/dr^2 - k^2/2) chi_0, from cos(kr) e^{-ar} with a = gamma, 2 gamma
template <class T>
T free_residual_chi0(const BasisSpec& spec, const T& k, const T& r) {
  using std::cos;
  using std::exp;
  using std::sin;
  const T g = T(spec.gamma);
  const T cs = cos(k * r);
  const T sn = sin(k * r);
  auto damped = [&](const T& a) { return exp(-a * r) * (-a * a / 2 * cs - a * k * sn); };
  return T(spec.norm) * (damped(g) - damped(2 * g));
}

// (-1/2 d^2/dr^2 - k^2/2) chi_i
template <class T>
T free_residual_chi(const BasisSpec& spec, const T& k, int i, const T& r) {
  using std::exp;
  if (i < 1 || i > spec.size()) {
    throw IndexOutOfRange("free_residual_chi: index " + std::to_string(i) + " outside 1.." +
                          std::to_string(spec.size()));
  }
  const bool first = i <= spec.m1;
  const int n = first ? i : i - spec.m1;
  const T a = T(first ? spec.alpha : spec.beta);
  // powers r^{n-2}, r^{n-1}, r^n
  T pn2 = 0;
  T pn1 = 0;
  T pn = 1;
  for (int q = 0; q < n; ++q) {
    pn2 = pn1;
    pn1 = pn;
    pn *= r;
  }
  const T second = (T(n * (n - 1)) * pn2 - 2 * a * T(n) * pn1 + a * a * pn) * exp(-a * r);
  return -second / 2 - k * k / 2 * pn * exp(-a * r);
}

/// Every basis function and its free residual at one radius, sharing the
/// exponentials. Index 0 of chi is chi_0.
template <class T>
struct BasisPoint {
  T s;
  T c;
  T c_residual;
  std::vector<T> chi;
  std::vector<T> chi_residual;
};

template <class T>
BasisPoint<T> sample_basis(const BasisSpec& spec, const T& k, const T& r) {
  using std::cos;
  using std::exp;
  using std::sin;
  const T g = T(spec.gamma);
  const T nrm = T(spec.norm);
  const T sn = sin(k * r);
  const T cs = cos(k * r);
  const T eg = exp(-g * r);
  const T eg2 = eg * eg;
  const T k2 = k * k;

  BasisPoint<T> pt;
  pt.s = nrm * sn;
  pt.c = nrm * cs * (1 - eg);
  pt.c_residual = nrm * eg * (k * g * sn + g * g / 2 * cs);

  const int m = spec.size();
  pt.chi.resize(m + 1);
  pt.chi_residual.resize(m + 1);
  pt.chi[0] = pt.c * eg;
  const T d1 = eg * (-g * g / 2 * cs - g * k * sn);
  const T g2 = 2 * g;
  const T d2 = eg2 * (-g2 * g2 / 2 * cs - g2 * k * sn);
  pt.chi_residual[0] = nrm * (d1 - d2);

  auto family = [&](double exponent, int count, int offset) {
    const T a = T(exponent);
    const T ea = exp(-a * r);
    T pn2 = 0;  // r^{n-2}
    T pn1 = 1;  // r^{n-1}
    for (int n = 1; n <= count; ++n) {
      const T pn = pn1 * r;
      const T second = (T(n * (n - 1)) * pn2 - 2 * a * T(n) * pn1 + a * a * pn) * ea;
      pt.chi[offset + n] = pn * ea;
      pt.chi_residual[offset + n] = -second / 2 - k2 / 2 * pn * ea;
      pn2 = pn1;
      pn1 = pn;
    }
  };
  family(spec.alpha, spec.m1, 0);
  family(spec.beta, spec.m2, spec.m1);
  return pt;
}

}  // namespace kohnlab
