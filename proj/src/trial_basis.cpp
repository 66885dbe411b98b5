#include "kohnlab/trial_basis.hpp"

namespace kohnlab {

void BasisSpec::validate() const {
  if (!(gamma > 0 && std::isfinite(gamma))) throw ValidationError("basis: gamma must be positive");
  if (!(alpha > 0 && std::isfinite(alpha))) throw ValidationError("basis: alpha must be positive");
  if (!(beta > 0 && std::isfinite(beta))) throw ValidationError("basis: beta must be positive");
  if (m1 < 0 || m2 < 0 || m1 + m2 < 1) {
    throw ValidationError("basis: m1, m2 must be non-negative with m1 + m2 >= 1");
  }
  if (!std::isfinite(c)) throw ValidationError("basis: c must be finite");
  if (!(norm != 0 && std::isfinite(norm))) throw ValidationError("basis: norm must be nonzero");
}

}  // namespace kohnlab
