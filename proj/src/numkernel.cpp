#include "copolab/numkernel.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <string>

namespace copolab {

namespace {

void require_same_ambient(const Subspace& a, const Subspace& b, const char* op) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw DimensionError(std::string(op) + ": ambient dimensions differ (" +
                         std::to_string(a.ambient_dim()) + " vs " +
                         std::to_string(b.ambient_dim()) + ")");
  }
}

}  // namespace

Subspace::Subspace(long ambient_dim, Matrix basis, double tol_used)
    : ambient_dim_(ambient_dim), basis_(std::move(basis)), tol_used_(tol_used) {
  if (basis_.rows() != ambient_dim_) {
    throw DimensionError("subspace basis has " + std::to_string(basis_.rows()) +
                         " rows for ambient dimension " + std::to_string(ambient_dim_));
  }
  if (basis_.cols() > ambient_dim_) {
    throw DimensionError("subspace dimension exceeds ambient dimension");
  }
  require_finite(basis_, "subspace basis");
}

Subspace Subspace::zero(long ambient_dim) {
  return Subspace(ambient_dim, Matrix(ambient_dim, 0), 0.0);
}

Subspace Subspace::full(long ambient_dim) {
  return Subspace(ambient_dim, Matrix::Identity(ambient_dim, ambient_dim), 0.0);
}

Matrix Subspace::projector() const { return basis_ * basis_.transpose(); }

Vector Subspace::project(const Vector& v) const {
  if (v.size() != ambient_dim_) throw DimensionError("projection: vector size mismatch");
  if (dim() == 0) return Vector::Zero(ambient_dim_);
  return basis_ * (basis_.transpose() * v);
}

double Subspace::containment_residual(const Vector& v) const {
  if (v.size() != ambient_dim_) throw DimensionError("containment: vector size mismatch");
  const double scale = std::max(1.0, v.norm());
  return (v - project(v)).norm() / scale;
}

double Subspace::containment_residual(const Subspace& other) const {
  require_same_ambient(*this, other, "containment");
  double worst = 0.0;
  for (long j = 0; j < other.dim(); ++j) {
    worst = std::max(worst, containment_residual(Vector(other.basis().col(j))));
  }
  return worst;
}

bool Subspace::contains(const Vector& v, double tol) const {
  return containment_residual(v) < tol;
}

bool Subspace::contains(const Subspace& other, double tol) const {
  return containment_residual(other) < tol;
}

long numerical_rank(const Matrix& m, const TolerancePolicy& policy) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  const double cut = policy.rel_rank_tol * s(0);
  if (s(0) <= policy.abs_zero_tol) return 0;
  long rank = 0;
  for (long i = 0; i < s.size(); ++i) {
    if (s(i) >= cut) ++rank;  // a value at the cut counts as significant
  }
  return rank;
}

Subspace orthonormal_basis(const Matrix& vectors, const TolerancePolicy& policy) {
  policy.validate();
  require_finite(vectors, "orthonormal_basis input");
  const long n = vectors.rows();
  if (vectors.cols() == 0 || n == 0) return Subspace::zero(n);

  Eigen::JacobiSVD<Matrix> svd(vectors, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  if (s(0) <= policy.abs_zero_tol) return Subspace::zero(n);
  const double cut = policy.rel_rank_tol * s(0);
  long rank = 0;
  for (long i = 0; i < s.size(); ++i) {
    if (s(i) >= cut) ++rank;
  }
  return Subspace(n, svd.matrixU().leftCols(rank), cut);
}

Subspace nullspace(const Matrix& m, const TolerancePolicy& policy) {
  policy.validate();
  require_finite(m, "nullspace input");
  const long n = m.cols();
  if (n == 0) return Subspace::zero(0);
  if (m.rows() == 0) return Subspace::full(n);

  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= policy.abs_zero_tol) return Subspace::full(n);
  const double cut = policy.rel_rank_tol * s(0);
  long rank = 0;
  for (long i = 0; i < s.size(); ++i) {
    if (s(i) >= cut) ++rank;  // ties shrink the nullspace, never grow it
  }
  const long null_dim = n - rank;
  return Subspace(n, svd.matrixV().rightCols(null_dim), cut);
}

Subspace subspace_intersect(const Subspace& a, const Subspace& b,
                            const TolerancePolicy& policy) {
  require_same_ambient(a, b, "subspace_intersect");
  const long n = a.ambient_dim();
  if (a.dim() == 0 || b.dim() == 0) return Subspace::zero(n);

  Matrix stacked(2 * n, n);
  stacked.topRows(n) = Matrix::Identity(n, n) - a.projector();
  stacked.bottomRows(n) = Matrix::Identity(n, n) - b.projector();
  return nullspace(stacked, policy);
}

Subspace subspace_sum(const Subspace& a, const Subspace& b,
                      const TolerancePolicy& policy) {
  require_same_ambient(a, b, "subspace_sum");
  Matrix joined(a.ambient_dim(), a.dim() + b.dim());
  joined.leftCols(a.dim()) = a.basis();
  joined.rightCols(b.dim()) = b.basis();
  return orthonormal_basis(joined, policy);
}

Subspace complement(const Subspace& a, const TolerancePolicy& policy) {
  const long n = a.ambient_dim();
  if (a.dim() == 0) return Subspace::full(n);
  return nullspace(Matrix(a.basis().transpose()), policy);
}

double subspace_distance(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b, "subspace_distance");
  const Matrix diff = a.projector() - b.projector();
  if (diff.rows() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(diff);
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

Matrix mat_exp(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw DimensionError("mat_exp: matrix is not square (" + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()) + ")");
  }
  require_finite(a, "mat_exp input");
  if (a.rows() == 0) return a;
  return a.exp();
}

Matrix commutator(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw DimensionError("commutator: operands must be square of equal size");
  }
  return a * b - b * a;
}

}  // namespace copolab
