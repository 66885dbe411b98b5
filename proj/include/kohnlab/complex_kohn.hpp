#pragma once

// Complex Kohn variant: the boundary function C̄ is replaced by the outgoing
// combination T̄ = S̄ + i C̄. Products stay bilinear (no complex conjugation).
//
// With Psi = S̄ + a' T̄ + sum p'_j chi_j the ratio of C̄ to S̄ is
// t = i a' / (1 + a'), so the S-matrix (1 + i t) / (1 - i t) is 1 / (1 + 2 a').

#include "kohnlab/kohn_engine.hpp"
#include "kohnlab/singularity_lab.hpp"

#include <vector>

namespace kohnlab {

struct ComplexSystem {
  Real tau = 0;
  ComplexMatrix a;  // <(T̄, chi), (H-E) (T̄, chi)>
  ComplexVector b;  // <(T̄, chi), (H-E) S̄>
  ComplexVector u;  // <S̄, (H-E) (T̄, chi)>
  Real sbar_sbar = 0;
};

/// A' and b' at tau by complex combination of the rotated real blocks.
ComplexSystem assemble_complex(const ElementTable& table, const Real& tau);

struct ComplexKohnSolution {
  Real tau = 0;
  Complex a_t;
  ComplexVector p;
  ComplexVector x;
  Complex stationary;  // [a'] = -kappa' (<S̄,(H-E)S̄> + b'.x')
  Complex j_full;      // a' - kappa' <Psi, (H-E) Psi>
  Complex s_matrix;
  double eta = 0;      // arg(s)/2 + tau - c, wrapped
  double deficit = 0;  // | |s| - 1 |
  Complex det;
  Complex d_const;  // det A' e^{2 i tau}
};

/// Solves A' x' = -b' and extracts the phase through the S-matrix argument.
/// Throws SingularMatrix.
ComplexKohnSolution complex_phase_shift(const ComplexSystem& sys, const ElementTable& table,
                                        double c);

/// (A - C) - i B
Complex d_from_coeffs(const QuadraticCoeffs& coeffs);

struct DTrace {
  std::vector<double> k;
  std::vector<double> abs_d;
  std::vector<double> re_d;
  std::vector<double> im_d;
  std::vector<double> normalized;  // |D| / coeffs.scale
  std::vector<bool> flagged;
  double median = 0;  // lower median of `normalized`
};

/// Flags k where |D| / scale is at or below 1e-8 times its sweep median.
/// Raw |D| spans many decades across k, so the comparison uses the
/// table-anchored normalization.
DTrace scan_D(const std::vector<double>& k, const std::vector<QuadraticCoeffs>& coeffs);

}  // namespace kohnlab
