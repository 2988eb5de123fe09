#pragma once

#include "copolab/orbits.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace copolab {

/// A linear section candidate through the origin, with the regular point
/// that anchors it.
struct SectionCandidate {
  enum class Source { canonical, user_supplied };

  Subspace sigma;
  Source source = Source::user_supplied;
  Vector anchor;                 // regular point inside sigma
  int discrete_fixes_used = 0;   // discrete elements that sharpened the section
};

/// Normalizer / centralizer algebras of a section (as subspaces of
/// coefficient space), the induced group dimension, and the restricted
/// representation on the section.
struct ReductionData {
  SectionCandidate cand;
  Subspace normalizer_alg;
  Subspace centralizer_alg;
  int weyl_dim = 0;
  LieRep reduced_rep;
};

struct AxiomCheck {
  bool pass = false;
  double residual = 0.0;
  std::string note;
};

struct AxiomReport {
  AxiomCheck a;  // totally geodesic: automatic for linear subspaces
  AxiomCheck b;  // meets every orbit: Monte-Carlo distance minimization
  AxiomCheck c;  // normal spaces of regular points contained in sigma
  AxiomCheck d;  // invariance under the normalizer-generated subgroup
  int samples = 0;
  std::uint64_t seed = 0;
  bool all_pass() const { return a.pass && b.pass && c.pass && d.pass; }
};

struct DePair {
  Subspace d;  // orbit tangent inside sigma
  Subspace e;  // orbit tangent inside the complement of sigma
  bool decomposes = false;
  double orthogonality_residual = 0.0;
};

struct InvarianceReport {
  bool pass = false;
  bool decomposition_ok = false;
  double max_residual = 0.0;
  long directions_checked = 0;
};

struct RegularityEquivalenceReport {
  bool pass = false;
  int samples = 0;
  std::uint64_t seed = 0;
  long max_orbit_dim = 0;
  long max_reduced_dim = 0;
  std::vector<Vector> counterexamples;
};

struct StabilityReport {
  int copol_original = 0;
  int copol_reduced = 0;
  long sigma_dim = 0;
  long cohomogeneity = 0;
  bool copolarity_stable = false;
  bool dimension_identity = false;  // dim sigma = cohom + copol
};

struct SlicePointReport {
  Vector point;
  long orbit_dim = 0;
  bool regular = false;
  int slice_copolarity = 0;
  bool inequality_holds = false;
  double vq_axiom_c_residual = 0.0;
  bool vq_axiom_c_pass = false;
};

struct SliceInequalityReport {
  int global_copolarity = 0;
  std::vector<SlicePointReport> points;
  bool all_pass() const;
};

/// Fixed subspace of the isotropy data at a certified regular point:
/// the common kernel of the isotropy algebra plus the fixed spaces of all
/// supplied discrete elements that fix the anchor.
SectionCandidate canonical_section(const LieRep& rep, const PointContext& ctx);

/// dim(T_p(orbit) intersect sigma) at the anchoring regular point.
int copolarity(const LieRep& rep, const SectionCandidate& cand, const PointContext& ctx);

AxiomReport verify_axioms(const LieRep& rep, const SectionCandidate& cand, int samples,
                          std::uint64_t seed);

/// Normalizer and centralizer algebras as linear conditions on coefficient
/// space; the reduced representation restricts a complement of the
/// centralizer inside the normalizer to sigma. A seeded descent search
/// collects normalizer elements beyond the identity component and stores
/// their restrictions as discrete elements of the reduced representation
/// (no component-count claim is attached). Pass component_search = 0 to
/// skip the search.
ReductionData reduction(const LieRep& rep, const SectionCandidate& cand,
                        int component_search = 24, std::uint64_t seed = 0);

DePair de_decompose(const LieRep& rep, const SectionCandidate& cand, const Vector& q);

/// Shape-operator invariance of the D/E decomposition at q, for all
/// directions in nu_q(orbit) intersect sigma.
InvarianceReport check_totally_geodesic(const LieRep& rep, const SectionCandidate& cand,
                                        const Vector& q);

RegularityEquivalenceReport regularity_equivalence(const LieRep& rep,
                                                   const ReductionData& red, int samples,
                                                   std::uint64_t seed);

StabilityReport stability_check(const LieRep& rep, const ReductionData& red, int trials,
                                std::uint64_t seed);

SliceInequalityReport slice_inequality(const LieRep& rep, const SectionCandidate& cand,
                                       const std::vector<Vector>& points, int trials,
                                       std::uint64_t seed);

/// Convenience pipeline: certified regular point, canonical section and
/// its copolarity. Besides a generic anchor, regular anchors inside the
/// fixed subspaces of the discrete elements are tried; a candidate is kept
/// only when it contains its anchor's normal space, and the candidate of
/// least copolarity wins.
struct CanonicalAnalysis {
  PointContext ctx;
  SectionCandidate cand;
  int copol = 0;
};
CanonicalAnalysis canonical_analysis(const LieRep& rep, int trials, std::uint64_t seed);

}  // namespace copolab
