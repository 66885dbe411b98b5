#include "kohnlab/linalg.hpp"

#include "kohnlab/errors.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <limits>
#include <string>

namespace kohnlab {

namespace {

template <class T>
T conjugate(const T& z) {
  if constexpr (std::is_same_v<T, Complex>) {
    return conj(z);
  } else {
    return z;
  }
}

template <class T>
Real magnitude(const T& z) {
  return Real(abs(z));
}

template <class T>
void check_pivots(const Eigen::PartialPivLU<Matrix<T>>& lu, const Real& norm) {
  const Real floor = Real(1e-30) * norm;
  const auto& m = lu.matrixLU();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (!(magnitude(m(i, i)) >= floor) || norm == 0) {
      throw SingularMatrix("LU pivot " + std::to_string(i) + " below 1e-30 * ||A||_1");
    }
  }
}

template <class T>
void check_square(const Matrix<T>& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw ValidationError("expected a nonempty square matrix");
  }
}

}  // namespace

template <class T>
LuSolve<T> lu_solve(const Matrix<T>& a, const Vector<T>& rhs) {
  check_square(a);
  if (rhs.size() != a.rows()) throw ValidationError("lu_solve: dimension mismatch");
  Eigen::PartialPivLU<Matrix<T>> lu(a);
  check_pivots(lu, one_norm(a));
  return {lu.solve(rhs), lu.determinant()};
}

template <class T>
T determinant(const Matrix<T>& a) {
  check_square(a);
  return Eigen::PartialPivLU<Matrix<T>>(a).determinant();
}

template <class T>
Matrix<T> inverse(const Matrix<T>& a) {
  check_square(a);
  Eigen::PartialPivLU<Matrix<T>> lu(a);
  check_pivots(lu, one_norm(a));
  const Eigen::Index n = a.rows();
  return lu.solve(Matrix<T>::Identity(n, n));
}

template <class T>
Matrix<T> adjugate(const Matrix<T>& a) {
  check_square(a);
  const Eigen::Index n = a.rows();
  if (n == 1) return Matrix<T>::Identity(1, 1);
  Eigen::PartialPivLU<Matrix<T>> lu(a);
  const T det = lu.determinant();
  const Real norm = one_norm(a);
  Real scale = 1;
  for (Eigen::Index i = 0; i < n; ++i) scale *= norm;
  if (scale > 0 && magnitude(det) >= Real(1e-12) * scale) {
    return det * lu.solve(Matrix<T>::Identity(n, n));
  }
  Eigen::JacobiSVD<Matrix<T>> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  Vector<T> minors(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    T prod = 1;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) prod *= T(sigma(j));
    }
    minors(i) = prod;
  }
  const Matrix<T>& u = svd.matrixU();
  const Matrix<T>& v = svd.matrixV();
  const T phase = Eigen::PartialPivLU<Matrix<T>>(u).determinant() *
                  conjugate(T(Eigen::PartialPivLU<Matrix<T>>(v).determinant()));
  return phase * (v * minors.asDiagonal() * u.adjoint());
}

template <class T>
T cofactor_determinant(const Matrix<T>& a) {
  check_square(a);
  const Eigen::Index n = a.rows();
  if (n == 1) return a(0, 0);
  if (n == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  T sum = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    Matrix<T> minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r) {
      for (Eigen::Index c = 0, cc = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = a(r, c);
      }
    }
    const T term = a(0, j) * cofactor_determinant<T>(minor);
    sum += (j % 2 == 0) ? term : T(-term);
  }
  return sum;
}

template <class T>
Matrix<T> cofactor_adjugate(const Matrix<T>& a) {
  check_square(a);
  const Eigen::Index n = a.rows();
  if (n == 1) return Matrix<T>::Identity(1, 1);
  Matrix<T> adj(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      Matrix<T> minor(n - 1, n - 1);
      for (Eigen::Index r = 0, rr = 0; r < n; ++r) {
        if (r == i) continue;
        for (Eigen::Index c = 0, cc = 0; c < n; ++c) {
          if (c == j) continue;
          minor(rr, cc++) = a(r, c);
        }
        ++rr;
      }
      const T cof = cofactor_determinant<T>(minor);
      adj(j, i) = ((i + j) % 2 == 0) ? cof : T(-cof);
    }
  }
  return adj;
}

template <class T>
Conditioning conditioning(const Matrix<T>& a) {
  check_square(a);
  Matrix<T> inv;
  try {
    inv = inverse(a);
  } catch (const SingularMatrix&) {
    return {std::numeric_limits<Real>::infinity(), Real(0)};
  }
  const Real kappa = one_norm(a) * one_norm(inv);
  return {kappa, 1 / kappa};
}

template LuSolve<Real> lu_solve(const RealMatrix&, const RealVector&);
template LuSolve<Complex> lu_solve(const ComplexMatrix&, const ComplexVector&);
template Real determinant(const RealMatrix&);
template Complex determinant(const ComplexMatrix&);
template RealMatrix inverse(const RealMatrix&);
template ComplexMatrix inverse(const ComplexMatrix&);
template RealMatrix adjugate(const RealMatrix&);
template ComplexMatrix adjugate(const ComplexMatrix&);
template RealMatrix cofactor_adjugate(const RealMatrix&);
template ComplexMatrix cofactor_adjugate(const ComplexMatrix&);
template Real cofactor_determinant(const RealMatrix&);
template Complex cofactor_determinant(const ComplexMatrix&);
template Conditioning conditioning(const RealMatrix&);
template Conditioning conditioning(const ComplexMatrix&);

}  // namespace kohnlab
