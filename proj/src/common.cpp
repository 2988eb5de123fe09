#include "copolab/common.hpp"

#include <cmath>
#include <sstream>

namespace copolab {

void TolerancePolicy::validate() const {
  if (!(rel_rank_tol > 0.0) || !(rel_rank_tol < 1.0)) {
    throw InputError("rel_rank_tol must lie in (0, 1)");
  }
  if (!(abs_zero_tol > 0.0)) throw InputError("abs_zero_tol must be positive");
  if (!(containment_tol > 0.0)) throw InputError("containment_tol must be positive");
}

NotClosedError::NotClosedError(long i_, long j_, double residual_)
    : Error("bracket [X_" + std::to_string(i_) + ", X_" + std::to_string(j_) +
            "] leaves the generator span (residual " + std::to_string(residual_) + ")"),
      i(i_),
      j(j_),
      residual(residual_) {}

NotInvolutionError::NotInvolutionError(double residual_)
    : Error("involution candidate does not square to the identity (residual " +
            std::to_string(residual_) + ")"),
      residual(residual_) {}

NotAutomorphismError::NotAutomorphismError(double residual_)
    : Error("involution is not a bracket automorphism (residual " +
            std::to_string(residual_) + ")"),
      residual(residual_) {}

NotTripleError::NotTripleError(double residual_)
    : Error("subspace is not a Lie triple system (residual " +
            std::to_string(residual_) + ")"),
      residual(residual_) {}

PreconditionError::PreconditionError(const std::string& what, double residual_)
    : Error(what + " (residual " + std::to_string(residual_) + ")"),
      residual(residual_) {}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw NonFiniteError(std::string(what) + " contains NaN or Inf entries");
  }
}

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    throw NonFiniteError(std::string(what) + " contains NaN or Inf entries");
  }
}

}  // namespace copolab
