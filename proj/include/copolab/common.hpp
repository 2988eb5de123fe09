#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace copolab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thresholds governing every rank and containment decision in the toolkit.
/// Rank cuts are relative to the largest singular value; a value exactly
/// at the cut counts as significant, so nullspace-based intersections
/// never over-report their dimension.
struct TolerancePolicy {
  double rel_rank_tol = 1e-8;
  double abs_zero_tol = 1e-10;
  double containment_tol = 1e-7;

  void validate() const;
};

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(what) {}
};

class NonFiniteError : public Error {
 public:
  explicit NonFiniteError(const std::string& what) : Error(what) {}
};

/// A generator bracket left the span of the generators.
class NotClosedError : public Error {
 public:
  NotClosedError(long i, long j, double residual);
  long i;
  long j;
  double residual;
};

class NotInvolutionError : public Error {
 public:
  explicit NotInvolutionError(double residual);
  double residual;
};

class NotAutomorphismError : public Error {
 public:
  explicit NotAutomorphismError(double residual);
  double residual;
};

class BadGradingError : public Error {
 public:
  explicit BadGradingError(const std::string& what) : Error(what) {}
};

/// Input subspace fails the triple-system condition [[m,m],m] <= m.
class NotTripleError : public Error {
 public:
  explicit NotTripleError(double residual);
  double residual;
};

/// (ad_X)^2 Y = -c Y with c > 0 does not hold for the supplied pair.
class EigenRelationError : public Error {
 public:
  explicit EigenRelationError(const std::string& what) : Error(what) {}
};

/// An operation precondition failed; carries the offending residual.
class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& what, double residual);
  double residual;
};

/// Malformed external input (schema violation, bad field, bad file).
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(what) {}
};

void require_finite(const Matrix& m, const char* what);
void require_finite(const Vector& v, const char* what);

}  // namespace copolab
