#include "oracles.hpp"

#include "copolab/rng.hpp"

#include <algorithm>
#include <cmath>

namespace copolab::testing {

long oracle_rank(Matrix m, double tol) {
  const long rows = m.rows();
  const long cols = m.cols();
  long rank = 0;
  long row = 0;
  for (long col = 0; col < cols && row < rows; ++col) {
    long pivot = row;
    for (long r = row + 1; r < rows; ++r) {
      if (std::abs(m(r, col)) > std::abs(m(pivot, col))) pivot = r;
    }
    if (std::abs(m(pivot, col)) <= tol) continue;
    m.row(pivot).swap(m.row(row));
    for (long r = row + 1; r < rows; ++r) {
      const double factor = m(r, col) / m(row, col);
      m.row(r) -= factor * m.row(row);
    }
    ++rank;
    ++row;
  }
  return rank;
}

long oracle_principal_orbit_dim(const LieRep& rep, int samples, std::uint64_t seed) {
  Rng rng(Rng::mix(seed, 0x0c1e));
  long best = 0;
  for (int i = 0; i < samples; ++i) {
    const Vector p = rng.gaussian_vector(rep.ambient_dim());
    best = std::max(best, oracle_rank(rep.orbit_map(p)));
  }
  return best;
}

}  // namespace copolab::testing
