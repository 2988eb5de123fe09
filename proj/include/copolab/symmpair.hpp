#pragma once

#include "copolab/liealg.hpp"

#include <optional>
#include <vector>

namespace copolab {

/// An abstract Lie algebra with an Ad-invariant inner product split by an
/// involutive automorphism into +1/-1 eigenspaces, plus an optional
/// faithful real matrix realization of the basis.
struct SymPair {
  StructureConstants sc;
  Matrix inner;      // symmetric positive definite on coefficient space
  Matrix sigma_inv;  // involution on coefficient space
  Subspace k_space;  // +1 eigenspace
  Subspace p_space;  // -1 eigenspace
  std::vector<Matrix> embedding;  // optional; one matrix per basis element
  TolerancePolicy policy;

  bool has_embedding() const { return !embedding.empty(); }
  Matrix embed(const Vector& coeffs) const;
  Vector coefficients(const Matrix& m) const;  // least squares against the basis
};

/// A Lie triple system m inside p, its bracket span [m,m] and the
/// subalgebra [m,m] + m.
struct TripleSystem {
  Subspace m;
  Subspace bracket_span;
  Subspace s_alg;
};

struct KsectionResult {
  int copolarity = 0;    // dim [m,m]
  long m_dim = 0;
  long section_dim = 0;  // dim([m,m] + m)
};

struct HkOrbitSpaces {
  Subspace tangent;  // flattened matrices h*g + g*k
  Subspace normal;   // flattened matrices g * (Ad_{g^-1}(h-perp) ^ k-perp)
  double orthogonality_residual = 0.0;
  long isotropy_dim_lifted = 0;  // pairs (X, Ad_{g^-1} X) solving X g = g Y
  long isotropy_dim_base = 0;    // dim(h ^ Ad_g k)
};

struct TangentFormulaReport {
  double distance = 0.0;  // projector gap between the two tangent spaces
  double fd_step = 0.0;
  bool pass = false;
};

struct GramEvidence {
  Matrix quadrature;   // Gram matrix from the actual flows
  Matrix closed_form;  // cosine form implied by the eigen-relation
  double discrepancy = 0.0;
  double min_eigenvalue = 0.0;
  double c = 0.0;  // (ad_X)^2 Y = -c Y
  int quadrature_nodes = 0;
};

/// Split by the involution; every structural invariant is verified and
/// violations are reported by type.
SymPair cartan_decompose(const StructureConstants& sc, const Matrix& inner,
                         const Matrix& sigma_inv, const TolerancePolicy& policy = {},
                         std::vector<Matrix> embedding = {});

/// Assemble and validate the triple system generated by m_basis (columns
/// are coefficient vectors inside p).
TripleSystem triple_system(const SymPair& pair, const Matrix& m_basis);

KsectionResult ksection_copolarity(const TripleSystem& ts);

/// Tangent and normal space of the two-sided orbit through g_elt, in
/// flattened matrix coordinates of the embedding.
HkOrbitSpaces hk_orbit_spaces(const SymPair& pair, const Subspace& h_alg,
                              const Matrix& g_elt);

/// Compare the tangent space of the exponential image of m at exp(2X)
/// (finite-difference oracle) with exp(X) * m * exp(X).
TangentFormulaReport tangent_formula_check(const SymPair& pair, const Subspace& m_sub,
                                           const Vector& x_coeffs, double fd_step = 1e-5);

/// Gram matrix of the flow family t -> exp(((1-t)/p_i) ad_X) Y over the
/// i-th odd primes, evaluated by quadrature on the flows and by the closed
/// cosine form; requires (ad_X)^2 Y = -c Y with c > 0 and |Y| = 1.
GramEvidence gauge_gram(const SymPair& pair, const Vector& x_coeffs, const Vector& y_coeffs,
                        int n_terms, int quadrature_nodes = 64);

}  // namespace copolab
