#pragma once

#include "copolab/liealg.hpp"
#include "copolab/symmpair.hpp"

#include <vector>

namespace copolab::testing {

/// Basis {E_ab - E_ba : a < b} of the skew-symmetric n x n matrices,
/// ordered lexicographically by (a, b).
std::vector<Matrix> so_generators(int n);

/// The rotation group acting diagonally on k stacked copies of R^n.
/// with_reflection adds the block-diagonal copy of diag(1,...,1,-1), an
/// orthogonal element preserving the orbits.
LieRep so_diag_rep(int n, int k, bool with_reflection = false,
                   TolerancePolicy policy = {});

/// Two independent plane rotations acting on R^2 + R^2.
LieRep torus_rep(TolerancePolicy policy = {});

struct PairData {
  StructureConstants sc;
  Matrix inner;
  Matrix sigma_inv;
  std::vector<Matrix> embedding;  // realified matrices
};

/// su(2) with the orthonormal basis -(i/2) sigma_a and the involution
/// induced by conjugation with diag(1, -1); k = span{u3}, p = span{u1, u2}.
PairData su2_pair();

/// su(3) with the orthonormal Gell-Mann basis -(i/2) lambda_a and the
/// involution induced by conjugation with diag(1, -1, -1).
PairData su3_pair();

/// Indices (0-based) of the su(3) basis vectors spanning the real
/// projective-plane tangent inside p: the two i*(symmetric off-diagonal)
/// directions touching the first row.
inline std::vector<long> su3_rp2_m_indices() { return {0, 3}; }

}  // namespace copolab::testing
