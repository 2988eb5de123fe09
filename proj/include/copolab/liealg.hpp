#pragma once

#include "copolab/numkernel.hpp"

#include <cstdint>
#include <vector>

namespace copolab {

/// Bracket table of an abstract Lie algebra: [X_i, X_j] = sum_k c_ijk X_k.
struct StructureConstants {
  long d = 0;
  std::vector<Matrix> table;  // table[i](j, k) = c_ijk

  double c(long i, long j, long k) const { return table[i](j, k); }

  /// Coefficient-space bracket.
  Vector bracket(const Vector& x, const Vector& y) const;

  /// Matrix of ad_x acting on coefficient space.
  Matrix ad(const Vector& x) const;

  double antisymmetry_residual() const;
  double jacobi_residual() const;
};

/// A linear representation of a Lie algebra on R^N: generator matrices,
/// optional orthogonal representatives of non-identity components, and
/// the tolerance policy everything downstream inherits. Validation is
/// eager: closure is checked on construction.
class LieRep {
 public:
  LieRep(long ambient_dim, std::vector<Matrix> generators,
         TolerancePolicy policy = {}, bool orthogonal = false,
         std::vector<Matrix> discrete_elements = {});

  long ambient_dim() const { return ambient_dim_; }
  long dim() const { return static_cast<long>(generators_.size()); }
  const std::vector<Matrix>& generators() const { return generators_; }
  const std::vector<Matrix>& discrete_elements() const { return discrete_elements_; }
  const TolerancePolicy& policy() const { return policy_; }
  bool orthogonal() const { return orthogonal_; }
  const StructureConstants& structure() const { return structure_; }

  /// sum_i coeffs_i X_i
  Matrix combine(const Vector& coeffs) const;

  /// N x d matrix with columns X_i p.
  Matrix orbit_map(const Vector& p) const;

 private:
  long ambient_dim_ = 0;
  std::vector<Matrix> generators_;
  std::vector<Matrix> discrete_elements_;
  TolerancePolicy policy_;
  bool orthogonal_ = false;
  StructureConstants structure_;
};

/// Structure constants by least-squares projection of each bracket onto
/// the generator span. Throws NotClosedError when a bracket leaves it.
StructureConstants check_closure(const std::vector<Matrix>& generators,
                                 const TolerancePolicy& policy);

/// Value of the Killing field sum_i coeffs_i X_i at p.
Vector killing_value(const LieRep& rep, const Vector& coeffs, const Vector& p);

/// Deterministic product of single-parameter exponentials
/// exp(t_1 X_1) ... exp(t_d X_d) with |t_j| <= radius.
Matrix sample_element(const LieRep& rep, double radius, std::uint64_t seed);

}  // namespace copolab
