#pragma once

#include <stdexcept>
#include <string>

namespace kohnlab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A spec, grid or run configuration violates its invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The oracle's two-point asymptotic match is degenerate.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

/// Doubling the quadrature node count moved a matrix element by more than the gate.
class QuadratureNotConverged : public Error {
 public:
  using Error::Error;
};

/// A pivot of the partial-pivot LU fell below 1e-30 * ||A||_1.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// det(A) and adj(A) b vanish together; the cotangent has no limit.
class DegenerateLimit : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class NoAnomalyFreeRoot : public Error {
 public:
  using Error::Error;
};

/// The determinant quadratic form vanishes identically in tau; no phase
/// shift is defined for this table.
class DegenerateSystem : public Error {
 public:
  using Error::Error;
};

}  // namespace kohnlab
