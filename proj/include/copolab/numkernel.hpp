#pragma once

#include "copolab/common.hpp"

namespace copolab {

/// A subspace of R^n carried by an orthonormal column basis, together
/// with the absolute singular-value threshold that certified its rank.
class Subspace {
 public:
  Subspace() = default;
  Subspace(long ambient_dim, Matrix basis, double tol_used);

  static Subspace zero(long ambient_dim);
  static Subspace full(long ambient_dim);

  long ambient_dim() const { return ambient_dim_; }
  long dim() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }
  double tol_used() const { return tol_used_; }

  Matrix projector() const;
  Vector project(const Vector& v) const;

  /// ||(I-P)v|| / max(1, ||v||)
  double containment_residual(const Vector& v) const;
  /// max over the other basis columns
  double containment_residual(const Subspace& other) const;
  bool contains(const Vector& v, double tol) const;
  bool contains(const Subspace& other, double tol) const;

 private:
  long ambient_dim_ = 0;
  Matrix basis_;  // ambient_dim x dim, orthonormal columns
  double tol_used_ = 0.0;
};

/// Orthonormal basis of the numerically significant column space; singular
/// values >= rel_rank_tol * sigma_max are kept.
Subspace orthonormal_basis(const Matrix& vectors, const TolerancePolicy& policy = {});

/// Nullspace of m under the same rank policy; a singular value exactly at
/// the threshold counts as nonzero, so the nullspace never over-reports.
Subspace nullspace(const Matrix& m, const TolerancePolicy& policy = {});

long numerical_rank(const Matrix& m, const TolerancePolicy& policy = {});

/// Intersection via the nullspace of the stacked projector complements
/// (I - P_a; I - P_b).
Subspace subspace_intersect(const Subspace& a, const Subspace& b,
                            const TolerancePolicy& policy = {});

Subspace subspace_sum(const Subspace& a, const Subspace& b,
                      const TolerancePolicy& policy = {});

/// Orthogonal complement in the ambient space.
Subspace complement(const Subspace& a, const TolerancePolicy& policy = {});

/// ||P_a - P_b||_2; zero iff the spans agree.
double subspace_distance(const Subspace& a, const Subspace& b);

/// Scaling-and-squaring Pade matrix exponential.
Matrix mat_exp(const Matrix& a);

/// ab - ba
Matrix commutator(const Matrix& a, const Matrix& b);

}  // namespace copolab
