#pragma once

// Dense solves, determinants, adjugates and 1-norm conditioning for the small
// Kohn systems. Instantiated for Real and Complex in linalg.cpp.

#include "kohnlab/numeric.hpp"

namespace kohnlab {

template <class T>
struct LuSolve {
  Vector<T> x;
  T det;
};

/// Solves a x = rhs by partial-pivot LU and returns det(a) alongside.
/// Throws SingularMatrix when a pivot magnitude is below 1e-30 * ||a||_1.
template <class T>
LuSolve<T> lu_solve(const Matrix<T>& a, const Vector<T>& rhs);

/// det(a) from the partial-pivot LU; never throws.
template <class T>
T determinant(const Matrix<T>& a);

/// Inverse by n solves against unit vectors. Throws SingularMatrix.
template <class T>
Matrix<T> inverse(const Matrix<T>& a);

/// adj(a) = det(a) a^{-1} for well-separated determinants. When
/// |det a| < 1e-12 ||a||_1^n the SVD form V adj(Sigma) U^* det(U V^*) is used,
/// which stays accurate through and at singularity.
template <class T>
Matrix<T> adjugate(const Matrix<T>& a);

/// Transposed cofactor matrix by Laplace expansion. Exponential cost; meant
/// for dimensions up to about 8.
template <class T>
Matrix<T> cofactor_adjugate(const Matrix<T>& a);

/// Determinant by Laplace expansion along the first row.
template <class T>
T cofactor_determinant(const Matrix<T>& a);

struct Conditioning {
  Real kappa;   // ||A||_1 ||A^{-1}||_1, infinity for singular A
  Real lambda;  // 1 / kappa, 0 for singular A
};

/// 1-norm condition number with ||A^{-1}||_1 formed exactly from n solves.
template <class T>
Conditioning conditioning(const Matrix<T>& a);

}  // namespace kohnlab
