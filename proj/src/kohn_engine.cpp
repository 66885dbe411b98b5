#include "kohnlab/kohn_engine.hpp"

#include "kohnlab/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <string>

namespace kohnlab {

ElementTable integrate_elements(const PotentialSpec& potential, const BasisSpec& basis, double k,
                                const RadialGrid& grid) {
  potential.validate();
  basis.validate();
  if (!(k > 0)) throw ValidationError("assemble_elements: k must be positive");

  const int m = basis.size();
  const Eigen::Index cols = m + 3;  // S, C, chi_0..chi_M
  const Eigen::Index rows = static_cast<Eigen::Index>(grid.size());
  const Real kr = k;
  const Real energy = kr * kr / 2;

  // Quadrature weights ride on the bra columns.
  RealMatrix bra(rows, cols);
  RealMatrix ket(rows, cols);
  const auto& nodes = grid.nodes();
  const auto& weights = grid.weights();
  for (Eigen::Index q = 0; q < rows; ++q) {
    const Real& r = nodes[q];
    const Real v = evaluate_potential(potential, r);
    const BasisPoint<Real> pt = sample_basis(basis, kr, r);
    const Real& w = weights[q];
    bra(q, 0) = w * pt.s;
    ket(q, 0) = v * pt.s;
    bra(q, 1) = w * pt.c;
    ket(q, 1) = pt.c_residual + v * pt.c;
    for (int j = 0; j <= m; ++j) {
      bra(q, 2 + j) = w * pt.chi[j];
      ket(q, 2 + j) = pt.chi_residual[j] + v * pt.chi[j];
    }
  }
  const RealMatrix g = bra.transpose() * ket;

  ElementTable t;
  t.k = kr;
  t.energy = energy;
  t.basis = basis;
  t.ss = g(0, 0);
  t.sc = g(0, 1);
  t.cs = g(1, 0);
  t.cc = g(1, 1);
  t.s_chi = g.block(0, 2, 1, m + 1).transpose();
  t.chi_s = g.block(2, 0, m + 1, 1);
  t.c_chi = g.block(1, 2, 1, m + 1).transpose();
  t.chi_c = g.block(2, 1, m + 1, 1);
  t.chi_chi = g.block(2, 2, m + 1, m + 1);
  return t;
}

Real ElementTable::det_scale() const {
  const Real block = std::max({Real(abs(ss)), Real(abs(sc)), Real(abs(cs)), Real(abs(cc))});
  return Real(abs(determinant<Real>(chi_chi))) * block;
}

namespace {

std::vector<Real> flatten(const ElementTable& t) {
  std::vector<Real> out{t.ss, t.sc, t.cs, t.cc};
  for (const RealVector* v : {&t.s_chi, &t.chi_s, &t.c_chi, &t.chi_c}) {
    out.insert(out.end(), v->data(), v->data() + v->size());
  }
  out.insert(out.end(), t.chi_chi.data(), t.chi_chi.data() + t.chi_chi.size());
  return out;
}

}  // namespace

ElementTable assemble_elements(const PotentialSpec& potential, const BasisSpec& basis, double k,
                               const RadialGrid& grid, double gate) {
  ElementTable coarse = integrate_elements(potential, basis, k, grid);
  const ElementTable fine = integrate_elements(potential, basis, k, grid.refined());
  const std::vector<Real> a = flatten(coarse);
  const std::vector<Real> b = flatten(fine);
  Real biggest = 0;
  for (const Real& x : b) biggest = std::max(biggest, Real(abs(x)));
  // Entries that vanish analytically are compared against the table scale.
  const Real floor = Real(1e-15) * biggest;
  Real worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Real denom = std::max(Real(abs(b[i])), floor);
    if (denom == 0) continue;
    worst = std::max(worst, Real(abs(a[i] - b[i]) / denom));
  }
  coarse.gate_deviation = to_double(worst);
  if (!(worst <= Real(gate))) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "element table moved by %.3e relative under doubled quadrature (gate %.1e)",
                  coarse.gate_deviation, gate);
    throw QuadratureNotConverged(msg);
  }
  return coarse;
}

RotatedSystem rotate_table(const ElementTable& t, const Real& tau) {
  if (!(tau >= 0 && tau < kPi<Real>)) {
    throw ValidationError("rotate_table: tau must lie in [0, pi)");
  }
  const Real c = cos(tau);
  const Real s = sin(tau);
  const Eigen::Index n = t.dim();

  RotatedSystem sys;
  sys.tau = tau;
  sys.a.resize(n, n);
  sys.b.resize(n);
  sys.u.resize(n);

  // C̄ = -s S + c C, S̄ = c S + s C
  sys.a(0, 0) = s * s * t.ss - s * c * (t.sc + t.cs) + c * c * t.cc;
  sys.a.block(0, 1, 1, n - 1) = (-s * t.s_chi + c * t.c_chi).transpose();
  sys.a.block(1, 0, n - 1, 1) = -s * t.chi_s + c * t.chi_c;
  sys.a.block(1, 1, n - 1, n - 1) = t.chi_chi;

  sys.b(0) = -s * c * t.ss - s * s * t.sc + c * c * t.cs + s * c * t.cc;
  sys.b.tail(n - 1) = c * t.chi_s + s * t.chi_c;

  sys.u(0) = -c * s * t.ss + c * c * t.sc - s * s * t.cs + s * c * t.cc;
  sys.u.tail(n - 1) = c * t.s_chi + s * t.c_chi;

  sys.sbar_sbar = c * c * t.ss + c * s * (t.sc + t.cs) + s * s * t.cc;
  return sys;
}

LuSolve<Real> solve_kohn(const RealMatrix& a, const RealVector& b) {
  return lu_solve<Real>(a, RealVector(-b));
}

Real kohn_functional(const RotatedSystem& sys, const Real& kappa, const RealVector& x) {
  const Real q = sys.sbar_sbar + x.dot(sys.u) + x.dot(sys.b) + x.dot(sys.a * x);
  return x(0) - kappa * q;
}

Real kohn_functional_reduced(const RotatedSystem& sys, const Real& kappa, const RealVector& x) {
  return -kappa * (sys.sbar_sbar + sys.b.dot(x));
}

PhaseValue phase_shift(const RealVector& x, const ElementTable& table, const Real& tau, double c) {
  const RotatedSystem sys = rotate_table(table, tau);
  const Real kappa = table.kappa();
  PhaseValue out;
  out.j_full = kohn_functional(sys, kappa, x);
  out.j_reduced = kohn_functional_reduced(sys, kappa, x);
  out.eta = to_double(wrap_phase<Real>(atan(out.j_full) + tau - Real(c)));
  return out;
}

Real kohn_cotangent(const ElementTable& table, const Real& tau, double /*c*/) {
  const RotatedSystem sys = rotate_table(table, tau);
  const Real det = determinant<Real>(sys.a);
  const RealVector xhat = adjugate<Real>(sys.a) * sys.b;
  const Real xb = xhat.dot(sys.b);

  const Real det_scale = table.det_scale();
  const Real block = std::max({Real(abs(table.ss)), Real(abs(table.sc)), Real(abs(table.cs)),
                               Real(abs(table.cc))});
  const Real b_norm = sys.b.cwiseAbs().sum();
  const Real xb_scale = block > 0 ? det_scale / block * b_norm * b_norm : Real(0);
  if (abs(det) <= Real(1e-30) * det_scale && abs(xb) <= Real(1e-30) * xb_scale) {
    throw DegenerateLimit("kohn_cotangent: det(A) and adj(A) b . b vanish together");
  }
  return det / (table.kappa() * (xb - det * sys.sbar_sbar));
}

KohnSolution solve_at(const ElementTable& table, const Real& tau, double c,
                      bool with_conditioning) {
  const RotatedSystem sys = rotate_table(table, tau);
  const LuSolve<Real> lu = solve_kohn(sys.a, sys.b);
  const Real kappa = table.kappa();

  KohnSolution sol;
  sol.tau = tau;
  sol.x = lu.x;
  sol.a_t = lu.x(0);
  sol.p = lu.x.tail(lu.x.size() - 1);
  sol.det = lu.det;
  sol.j_full = kohn_functional(sys, kappa, lu.x);
  sol.j_reduced = kohn_functional_reduced(sys, kappa, lu.x);
  sol.eta = to_double(wrap_phase<Real>(atan(sol.j_full) + tau - Real(c)));
  if (with_conditioning) {
    const Conditioning cond = conditioning<Real>(sys.a);
    sol.kappa = cond.kappa;
    sol.lambda = cond.lambda;
  }
  return sol;
}

}  // namespace kohnlab
