#pragma once

// (H-E) element table, tau rotation, Kohn linear system and the variational
// phase shift.
//
// Row and column order of the rotated system is [C̄, chi_0, chi_1 .. chi_M].
// The stationary functional is J = a_t - kappa <Psi_t, (H-E) Psi_t> with
// kappa = 2 / (N^2 k), and tan(eta_v - tau + c) = J.

#include "kohnlab/linalg.hpp"
#include "kohnlab/model_potential.hpp"
#include "kohnlab/numeric.hpp"
#include "kohnlab/radial_grid.hpp"
#include "kohnlab/trial_basis.hpp"

namespace kohnlab {

/// <X, (H-E) Y> among S, C and chi_0..chi_M, all at tau = 0.
struct ElementTable {
  Real k = 0;
  Real energy = 0;
  BasisSpec basis;
  Real ss = 0;
  Real sc = 0;
  Real cs = 0;
  Real cc = 0;
  RealVector s_chi;  // <S, (H-E) chi_j>
  RealVector chi_s;  // <chi_j, (H-E) S>
  RealVector c_chi;
  RealVector chi_c;
  RealMatrix chi_chi;
  /// Largest relative entry change under doubled quadrature order; 0 if no
  /// gate was run.
  double gate_deviation = 0;

  /// Dimension of the Kohn system, M + 2.
  Eigen::Index dim() const { return chi_chi.rows() + 1; }
  Real wronskian() const { return sc - cs; }
  /// kappa = 2 / (N^2 k)
  Real kappa() const { return 2 / (Real(basis.norm) * Real(basis.norm) * k); }
  /// Natural size of det A(tau): |det chi_chi| max(|ss|, |sc|, |cs|, |cc|).
  /// ||A||_1^n is useless here because the correlation block is nearly
  /// dependent.
  Real det_scale() const;
};

/// One quadrature pass with no convergence gate.
ElementTable integrate_elements(const PotentialSpec& potential, const BasisSpec& basis, double k,
                                const RadialGrid& grid);

/// integrate_elements on `grid`, repeated on grid.refined(); throws
/// QuadratureNotConverged if any entry moves by more than `gate` relative.
ElementTable assemble_elements(const PotentialSpec& potential, const BasisSpec& basis, double k,
                               const RadialGrid& grid, double gate = 1e-10);

struct RotatedSystem {
  Real tau = 0;
  RealMatrix a;          // <(C̄, chi), (H-E) (C̄, chi)>
  RealVector b;          // <(C̄, chi), (H-E) S̄>
  RealVector u;          // <S̄, (H-E) (C̄, chi)>
  Real sbar_sbar = 0;    // <S̄, (H-E) S̄>
};

/// Rotated blocks from the tau = 0 table. Throws ValidationError unless
/// tau is in [0, pi).
RotatedSystem rotate_table(const ElementTable& table, const Real& tau);

/// x = (a_t, p_0..p_M) solving A x = -b, with det(A). Throws SingularMatrix.
LuSolve<Real> solve_kohn(const RealMatrix& a, const RealVector& b);

/// Full quadratic form J = a_t - kappa <Psi_t, (H-E) Psi_t> for any x.
Real kohn_functional(const RotatedSystem& sys, const Real& kappa, const RealVector& x);

/// J at stationarity from -kappa (<S̄,(H-E)S̄> + b.x).
Real kohn_functional_reduced(const RotatedSystem& sys, const Real& kappa, const RealVector& x);

struct PhaseValue {
  double eta = 0;  // wrapped to (-pi/2, pi/2]
  Real j_full = 0;
  Real j_reduced = 0;
};

/// eta_v = arctan(J) + tau - c from the full quadratic form; the reduced
/// value is returned alongside for cross-checking.
PhaseValue phase_shift(const RealVector& x, const ElementTable& table, const Real& tau, double c);

/// cot(eta_v - tau + c) = det A / (kappa (adj(A) b . b - det A <S̄,(H-E)S̄>)).
/// Finite at singular A. Throws DegenerateLimit when det A and adj(A) b . b
/// both fall below 1e-30 of their scale (table.det_scale(), times |b|^2 /
/// max |2x2 block| for the second).
Real kohn_cotangent(const ElementTable& table, const Real& tau, double c);

struct KohnSolution {
  Real tau = 0;
  Real a_t = 0;
  RealVector p;  // p_0..p_M
  RealVector x;  // (a_t, p)
  double eta = 0;
  Real j_full = 0;
  Real j_reduced = 0;
  Real det = 0;
  Real kappa = 0;   // 1-norm condition number of A
  Real lambda = 0;  // 1 / kappa
};

/// Rotate, solve and evaluate the phase shift at one tau. Conditioning is
/// skipped when `with_conditioning` is false (kappa, lambda left 0).
KohnSolution solve_at(const ElementTable& table, const Real& tau, double c,
                      bool with_conditioning = true);

}  // namespace kohnlab
