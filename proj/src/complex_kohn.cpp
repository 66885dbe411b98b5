#include "kohnlab/complex_kohn.hpp"

#include "kohnlab/errors.hpp"
#include "kohnlab/linalg.hpp"

#include <cmath>

namespace kohnlab {

ComplexSystem assemble_complex(const ElementTable& table, const Real& tau) {
  const RotatedSystem r = rotate_table(table, tau);
  const Eigen::Index n = r.a.rows();
  // <S̄,(H-E)C̄> is r.u(0), <C̄,(H-E)S̄> is r.b(0), <S̄,(H-E)chi_j> is r.u(j).
  ComplexSystem out;
  out.tau = tau;
  out.sbar_sbar = r.sbar_sbar;
  out.a = r.a.cast<Complex>();
  out.a(0, 0) = Complex(r.sbar_sbar - r.a(0, 0), r.u(0) + r.b(0));
  for (Eigen::Index j = 1; j < n; ++j) {
    out.a(0, j) = Complex(r.u(j), r.a(0, j));
    out.a(j, 0) = Complex(r.b(j), r.a(j, 0));
  }
  out.b = r.b.cast<Complex>();
  out.b(0) = Complex(r.sbar_sbar, r.b(0));
  out.u = r.u.cast<Complex>();
  out.u(0) = Complex(r.sbar_sbar, r.u(0));
  return out;
}

ComplexKohnSolution complex_phase_shift(const ComplexSystem& sys, const ElementTable& table,
                                        double c) {
  const LuSolve<Complex> lu = lu_solve<Complex>(sys.a, ComplexVector(-sys.b));
  const Complex i(0, 1);
  const Complex kappa = table.kappa() / i;

  ComplexKohnSolution out;
  out.tau = sys.tau;
  out.x = lu.x;
  out.a_t = lu.x(0);
  out.p = lu.x.tail(lu.x.size() - 1);
  out.det = lu.det;
  out.d_const = lu.det * exp(Complex(0, 2 * sys.tau));

  Complex bx = 0;
  Complex q = sys.sbar_sbar;
  const Complex ax_dot = lu.x.transpose() * (sys.a * lu.x);
  for (Eigen::Index j = 0; j < lu.x.size(); ++j) {
    bx += sys.b(j) * lu.x(j);
    q += lu.x(j) * (sys.u(j) + sys.b(j));
  }
  q += ax_dot;
  out.stationary = -kappa * (Complex(sys.sbar_sbar) + bx);
  out.j_full = lu.x(0) - kappa * q;

  out.s_matrix = Complex(1) / (Complex(1) + Complex(2) * out.stationary);
  const Real arg_s = atan2(out.s_matrix.imag(), out.s_matrix.real());
  out.eta = to_double(wrap_phase<Real>(arg_s / 2 + sys.tau - Real(c)));
  out.deficit = std::abs(to_double(Real(abs(out.s_matrix))) - 1.0);
  return out;
}

Complex d_from_coeffs(const QuadraticCoeffs& q) { return Complex(q.a - q.c, -q.b); }

DTrace scan_D(const std::vector<double>& k, const std::vector<QuadraticCoeffs>& coeffs) {
  if (k.size() != coeffs.size()) throw ValidationError("scan_D: k and coefficient counts differ");
  DTrace out;
  out.k = k;
  for (const QuadraticCoeffs& q : coeffs) {
    const Complex d = d_from_coeffs(q);
    const Real mag = abs(d);
    out.abs_d.push_back(to_double(mag));
    out.re_d.push_back(to_double(Real(d.real())));
    out.im_d.push_back(to_double(Real(d.imag())));
    out.normalized.push_back(q.scale > 0 ? to_double(Real(mag / q.scale)) : 0.0);
  }
  if (out.normalized.empty()) return out;
  out.median = median_of(out.normalized);
  for (double v : out.normalized) out.flagged.push_back(v <= 1e-8 * out.median);
  return out;
}

}  // namespace kohnlab
