#pragma once

#include "copolab/sections.hpp"
#include "copolab/symmpair.hpp"

#include <cstdint>
#include <vector>

namespace copolab {

/// A nested triple h (ideal) inside n inside g, with h and n closed under
/// the bracket. Quotient computations use the orthogonal complement of h
/// in coefficient space.
struct TripleDatum {
  StructureConstants sc;
  Subspace h_alg;
  Subspace n_alg;
  TolerancePolicy policy;

  long quotient_dim() const { return sc.d - h_alg.dim(); }
};

TripleDatum make_triple_datum(const StructureConstants& sc, const Subspace& h_alg,
                              const Subspace& n_alg, const TolerancePolicy& policy = {});

/// A symmetric bilinear form on g/h solving the skewness constraints for
/// every element of n, and whether a positive-definite representative was
/// found within the search budget.
struct MetricSolution {
  Matrix s;  // on the orthogonal complement of h, Frobenius-normalized
  bool feasible = false;
  double min_eig = 0.0;
  double skew_residual = 0.0;
  long solution_space_dim = 0;
};

struct DiffeoCriterion {
  bool sum_is_full = false;         // T_s(orbit) + sigma = ambient
  bool normal_contained = false;    // nu_s(orbit) inside sigma
  bool isotropy_preserved = false;  // dim(g_s) = dim(n ^ g_s)
  double normal_residual = 0.0;
  bool consistent() const {
    return sum_is_full == normal_contained && normal_contained == isotropy_preserved;
  }
  bool pass() const { return sum_is_full && normal_contained && isotropy_preserved; }
};

struct DimensionAuditRow {
  Vector point;
  long orbit_dim = 0;
  long reduced_orbit_dim = 0;
  bool identity_holds = false;  // ambient = dim sigma + orbit - reduced orbit
};

struct DimensionAudit {
  std::vector<DimensionAuditRow> rows;
  bool chain_identity = false;  // dim sigma = cohom + weyl - reduced principal isotropy
  bool pass = false;
};

struct IsometryCheck {
  double residual = 0.0;
  long compared_dim = 0;
  bool pass = false;
};

/// Dimension of the isotropy algebra that survives on the resolved space:
/// dim(normalizer ^ g_s).
long resolution_isotropy(const LieRep& rep, const ReductionData& red, const Vector& s_point);

/// Three equivalent forms of the local-diffeomorphism criterion at a point
/// of the section, evaluated independently.
DiffeoCriterion local_diffeo_criterion(const LieRep& rep, const ReductionData& red,
                                       const Vector& s_point);

/// Integer dimension bookkeeping at sampled regular points of the section.
DimensionAudit dimension_audit(const LieRep& rep, const ReductionData& red, int samples,
                               std::uint64_t seed);

/// Solve S ad_X + ad_X^T S = 0 on g/h for all X in n, then search the
/// solution space for a positive definite element. "Not feasible" means
/// not found within the budget, never a proof of nonexistence.
MetricSolution gw_metric(const TripleDatum& td, int max_sweeps = 60);

/// Verify that the S-orthogonal complement of n/h in g/h maps isometrically
/// onto g/n with the submersed quotient inner product.
IsometryCheck metric_isometry_check(const TripleDatum& td, const MetricSolution& sol);

}  // namespace copolab
