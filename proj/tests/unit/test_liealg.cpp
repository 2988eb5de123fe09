#include "copolab/liealg.hpp"

#include "builders.hpp"
#include "copolab/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace copolab;
using copolab::testing::so_generators;

TEST_CASE("closure of the rotation algebra") {
  const auto gens = so_generators(3);
  const LieRep rep(3, gens, {}, true);
  const StructureConstants& sc = rep.structure();

  CHECK(sc.d == 3);
  CHECK(sc.antisymmetry_residual() < 1e-10);
  CHECK(sc.jacobi_residual() < 1e-9);

  // Brackets reconstruct from the table.
  for (long i = 0; i < 3; ++i) {
    for (long j = 0; j < 3; ++j) {
      Matrix expected = Matrix::Zero(3, 3);
      for (long k = 0; k < 3; ++k) expected += sc.c(i, j, k) * gens[k];
      const Matrix actual = commutator(gens[i], gens[j]);
      CHECK((actual - expected).lpNorm<Eigen::Infinity>() < 1e-7);
    }
  }
}

TEST_CASE("abelian algebra has zero constants") {
  Matrix j2 = Matrix::Zero(2, 2);
  j2(0, 1) = -1.0;
  j2(1, 0) = 1.0;
  const LieRep rep(2, {j2}, {}, true);
  CHECK(rep.structure().table[0].lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("non-closed generators are rejected at load") {
  Matrix e12 = Matrix::Zero(2, 2), e21 = Matrix::Zero(2, 2);
  e12(0, 1) = 1.0;
  e21(1, 0) = 1.0;
  // [E12, E21] = diag(1, -1) lies outside span{E12, E21}.
  CHECK_THROWS_AS(LieRep(2, {e12, e21}), NotClosedError);
  try {
    LieRep rep(2, {e12, e21});
  } catch (const NotClosedError& e) {
    CHECK(e.i == 0);
    CHECK(e.j == 1);
    CHECK(e.residual > 0.1);
  }
}

TEST_CASE("dependent generators are rejected") {
  Matrix j = Matrix::Zero(2, 2);
  j(0, 1) = -1.0;
  j(1, 0) = 1.0;
  CHECK_THROWS_AS(LieRep(2, {j, 2.0 * j}), InputError);
}

TEST_CASE("orthogonal flag requires skew generators") {
  Matrix sym = Matrix::Zero(2, 2);
  sym(0, 1) = 1.0;
  sym(1, 0) = 1.0;
  CHECK_THROWS_AS(LieRep(2, {sym}, {}, true), InputError);
  CHECK_NOTHROW(LieRep(2, {sym}, {}, false));
}

TEST_CASE("killing field values") {
  Matrix j = Matrix::Zero(2, 2);
  j(0, 1) = -1.0;
  j(1, 0) = 1.0;
  const LieRep rep(2, {j}, {}, true);

  Vector p(2);
  p << 1.0, 0.0;
  Vector coeffs(1);
  coeffs << 1.0;
  const Vector v = killing_value(rep, coeffs, p);
  CHECK(v(0) == 0.0);
  CHECK(v(1) == 1.0);

  CHECK(killing_value(rep, Vector::Zero(1), p).norm() == 0.0);
  CHECK(killing_value(rep, coeffs, Vector::Zero(2)).norm() == 0.0);

  SUBCASE("bilinearity probes") {
    Rng rng(5);
    const LieRep so3(3, so_generators(3), {}, true);
    for (int trial = 0; trial < 10; ++trial) {
      const Vector c1 = rng.gaussian_vector(3), c2 = rng.gaussian_vector(3);
      const Vector q1 = rng.gaussian_vector(3), q2 = rng.gaussian_vector(3);
      const double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
      const Vector lhs = killing_value(so3, a * c1 + b * c2, q1);
      const Vector rhs = a * killing_value(so3, c1, q1) + b * killing_value(so3, c2, q1);
      CHECK((lhs - rhs).norm() < 1e-12 * (1.0 + lhs.norm()));
      const Vector lhs2 = killing_value(so3, c1, a * q1 + b * q2);
      const Vector rhs2 = a * killing_value(so3, c1, q1) + b * killing_value(so3, c1, q2);
      CHECK((lhs2 - rhs2).norm() < 1e-12 * (1.0 + lhs2.norm()));
    }
  }
}

TEST_CASE("group element sampling") {
  const LieRep so2 = [] {
    Matrix j = Matrix::Zero(2, 2);
    j(0, 1) = -1.0;
    j(1, 0) = 1.0;
    return LieRep(2, {j}, {}, true);
  }();

  SUBCASE("small radius approaches the identity") {
    const Matrix g = sample_element(so2, 1e-9, 1);
    CHECK((g - Matrix::Identity(2, 2)).lpNorm<Eigen::Infinity>() < 1e-8);
  }
  SUBCASE("rotation group gives special orthogonal elements") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Matrix g = sample_element(so2, 3.0, seed);
      CHECK((g.transpose() * g - Matrix::Identity(2, 2)).lpNorm<Eigen::Infinity>() < 1e-10);
      CHECK(g.determinant() == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
  SUBCASE("sampling is deterministic per seed") {
    const Matrix a = sample_element(so2, 2.0, 42);
    const Matrix b = sample_element(so2, 2.0, 42);
    CHECK((a - b).lpNorm<Eigen::Infinity>() == 0.0);
  }
  SUBCASE("conjugation commutes with the exponential") {
    const LieRep so3(3, so_generators(3), {}, true);
    Rng rng(17);
    for (int trial = 0; trial < 5; ++trial) {
      const Matrix g = sample_element(so3, 2.0, 100 + trial);
      const Matrix x = so3.combine(rng.gaussian_vector(3));
      const Matrix lhs = g * mat_exp(x) * g.transpose();
      const Matrix rhs = mat_exp(g * x * g.transpose());
      CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() < 1e-9);
    }
  }
}
