#pragma once

#include "copolab/liealg.hpp"

#include <cstdint>

namespace copolab::testing {

/// Rank by Gaussian elimination with partial pivoting; independent of the
/// SVD route used by the library.
long oracle_rank(Matrix m, double tol = 1e-9);

/// Maximal orbit-map rank over Gaussian sample points, using oracle_rank.
long oracle_principal_orbit_dim(const LieRep& rep, int samples, std::uint64_t seed);

}  // namespace copolab::testing
