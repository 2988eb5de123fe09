#pragma once

#include "copolab/liealg.hpp"

#include <cstdint>
#include <optional>

namespace copolab {

/// How a point earned its regularity flag: the maximal orbit dimension
/// seen over a seeded sampling run.
struct RegularityCertificate {
  long max_orbit_dim = 0;
  int samples = 0;
  std::uint64_t seed = 0;
};

/// A point together with its orbit tangent space, normal space and
/// isotropy subalgebra (as a subspace of coefficient space R^d).
struct PointContext {
  Vector p;
  Subspace orbit_tangent;
  Subspace normal;
  Subspace isotropy_alg;
  bool regular = false;
  std::optional<RegularityCertificate> certificate;

  long orbit_dim() const { return orbit_tangent.dim(); }
};

/// Affine vector field t -> a + t b along a straight-line geodesic.
struct AffineField {
  Vector a;
  Vector b;
  Vector at(double t) const { return a + t * b; }
};

struct JacobiTriple {
  AffineField j0;
  AffineField jd;
  AffineField je;
  double split_residual = 0.0;       // ||J - (J0+JD+JE)|| over sampled t
  double je_normality_residual = 0.0;  // max ||P_sigma JE(t)|| over sampled t
};

struct DistanceEstimate {
  double value = 0.0;
  bool stable = false;  // best value unchanged over the last half of restarts
  int restarts = 0;
};

/// Tangent/normal/isotropy data at p. The same SVD decides the orbit rank
/// and the isotropy nullity, so rank-nullity holds exactly.
PointContext analyze_point(const LieRep& rep, const Vector& p);

/// Maximal orbit dimension over `trials` Gaussian sample points.
long principal_orbit_dim(const LieRep& rep, int trials, std::uint64_t seed);

/// A certified regular point: Gaussian sampling establishes the principal
/// orbit dimension; when discrete elements are supplied, a regular point
/// inside their common fixed subspace is preferred so the fixed-space data
/// can participate in canonical sections.
PointContext find_regular(const LieRep& rep, int trials, std::uint64_t seed);

/// Mark ctx regular if its orbit dimension matches the sampled maximum.
void certify_regular(const LieRep& rep, PointContext& ctx, int trials, std::uint64_t seed);

/// Isotropy-algebra action restricted to the normal space of the orbit,
/// expressed in ctx.normal's basis; numerically dependent generators are
/// dropped. The result is validated (closure re-checked).
LieRep slice_rep(const LieRep& rep, const PointContext& ctx);

/// Shape operator A_v of the orbit at ctx.p in the orthonormal basis of
/// ctx.orbit_tangent, for a normal direction v.
Matrix shape_operator(const LieRep& rep, const PointContext& ctx, const Vector& v);

/// Split the affine Jacobi field J(t) = a + t b along the normal geodesic
/// through ctx.p in direction v into J0 + JD + JE relative to the linear
/// section sigma.
JacobiTriple jacobi_split(const LieRep& rep, const Subspace& sigma, const PointContext& ctx,
                          const Vector& v, const Vector& a, const Vector& b);

/// Upper-bound estimate of min_g ||g p - q|| by seeded restarts of a
/// quasi-Newton descent over the exponential chart of the identity
/// component; discrete elements contribute their cosets.
DistanceEstimate orbit_distance(const LieRep& rep, const Vector& p, const Vector& q,
                                int budget, std::uint64_t seed);

struct DescendResult {
  double value = 0.0;
  Vector t;
};

/// One quasi-Newton descent of sum_j ||A exp(sum_i t_i X_i) p_j - b_j||^2
/// over the exponential chart, started at t. Columns of points/targets are
/// the pairs (p_j, b_j); pass A = nullptr for the identity.
DescendResult descend_group_targets(const LieRep& rep, const Matrix* A, const Matrix& points,
                                    const Matrix& targets, Vector t, int max_iter = 250);

/// Single-point convenience wrapper returning the reached squared value.
double descend_group_objective(const LieRep& rep, const Matrix* A, const Vector& p,
                               const Vector& b, Vector t, int max_iter = 250);

/// Identity plus the discrete elements closed under one round of pairwise
/// products, deduplicated; the element set orbit_distance minimizes over.
std::vector<Matrix> coset_elements(const LieRep& rep, std::size_t cap = 16);

}  // namespace copolab
