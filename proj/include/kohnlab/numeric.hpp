#pragma once

// Scalar and matrix types shared by every module.
//
// Matrix elements of the Kohn system are carried in 113-bit binary floating
// point. The default correlation basis is close enough to linear dependence
// that double precision cannot resolve det(A) or the roots of its quadratic
// form; user-facing angles and diagnostics are reported as double.

#include <boost/multiprecision/complex128.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/float128.hpp>

#include <Eigen/Core>
#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <numbers>

namespace kohnlab {

using Real = boost::multiprecision::float128;
using Complex = boost::multiprecision::complex128;

template <class T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using RealMatrix = Matrix<Real>;
using RealVector = Vector<Real>;
using ComplexMatrix = Matrix<Complex>;
using ComplexVector = Vector<Complex>;

template <class T>
inline const T kPi = T(std::numbers::pi);
template <>
inline const Real kPi<Real> = boost::math::constants::pi<Real>();

inline double to_double(const Real& x) { return x.convert_to<double>(); }
inline double to_double(double x) { return x; }

/// Wraps an angle into (-pi/2, pi/2] by adding integer multiples of pi.
/// An input landing exactly on -pi/2 maps to +pi/2.
template <class T>
T wrap_phase(T x) {
  using std::floor;
  const T pi = kPi<T>;
  T y = x - pi * floor((x + pi / 2) / pi);  // [-pi/2, pi/2)
  if (y <= -pi / 2) y += pi;
  if (y > pi / 2) y -= pi;
  return y;
}

/// Wraps an angle into [0, pi).
template <class T>
T wrap_tau(T x) {
  using std::floor;
  const T pi = kPi<T>;
  T y = x - pi * floor(x / pi);
  if (y >= pi) y -= pi;
  if (y < 0) y += pi;
  return y;
}

/// Signed distance between two phases modulo pi, in (-pi/2, pi/2].
template <class T>
T phase_difference(T a, T b) {
  return wrap_phase<T>(a - b);
}

/// Matrix 1-norm: maximum absolute column sum.
template <class T>
Real one_norm(const Matrix<T>& a) {
  Real best = 0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    Real col = 0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) col += abs(a(i, j));
    if (col > best) best = col;
  }
  return best;
}

}  // namespace kohnlab
