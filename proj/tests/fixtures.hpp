#pragma once

#include "kohnlab/complex_kohn.hpp"
#include "kohnlab/kohn_engine.hpp"
#include "kohnlab/singularity_lab.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <random>

namespace fixtures {

using namespace kohnlab;

inline const RadialGrid& default_grid() {
  static const RadialGrid grid = RadialGrid::build();
  return grid;
}

inline PotentialSpec default_potential() { return PotentialSpec::exponential(-3.0, 1.0); }

/// Gated default-model table, memoized per k.
inline const ElementTable& default_table(double k) {
  static std::map<double, ElementTable> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(k);
  if (it == cache.end()) {
    it = cache.emplace(k, assemble_elements(default_potential(), BasisSpec{}, k, default_grid()))
             .first;
  }
  return it->second;
}

inline ElementTable zero_table(double k, BasisSpec basis = {}) {
  return assemble_elements(PotentialSpec::zero(), basis, k, default_grid());
}

/// Table whose open-channel functions lie exactly in the span of the
/// correlation block, so det A(tau) vanishes for every tau. `noise` is added
/// to every entry to make it near rather than exactly rank deficient.
inline ElementTable synthetic_degenerate(double noise, unsigned seed = 7) {
  const int m = 3;  // chi_0..chi_3
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RealMatrix g(m + 1, m + 1);
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m; ++j) g(i, j) = u(rng);
  const RealMatrix x = g * g.transpose() + RealMatrix::Identity(m + 1, m + 1);
  RealVector p(m + 1), q(m + 1);
  for (int i = 0; i <= m; ++i) {
    p(i) = u(rng);
    q(i) = u(rng);
  }
  ElementTable t;
  t.k = 0.3;
  t.energy = Real(0.045);
  t.basis.m1 = 2;
  t.basis.m2 = 1;
  t.ss = p.dot(x * p);
  t.sc = p.dot(x * q);
  t.cs = t.sc;
  t.cc = q.dot(x * q);
  t.s_chi = x * p;
  t.chi_s = x * p;
  t.c_chi = x * q;
  t.chi_c = x * q;
  t.chi_chi = x;
  if (noise != 0) {
    auto jitter = [&](Real& v) { v += Real(noise * u(rng)); };
    jitter(t.ss);
    jitter(t.sc);
    jitter(t.cs);
    jitter(t.cc);
    for (RealVector* v : {&t.s_chi, &t.chi_s, &t.c_chi, &t.chi_c})
      for (Eigen::Index i = 0; i < v->size(); ++i) jitter((*v)(i));
  }
  return t;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace fixtures
