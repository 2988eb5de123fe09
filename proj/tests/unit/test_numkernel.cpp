#include "copolab/numkernel.hpp"

#include "copolab/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace copolab;

namespace {

Matrix columns(std::initializer_list<Vector> cols) {
  const long n = cols.begin()->size();
  Matrix m(n, static_cast<long>(cols.size()));
  long c = 0;
  for (const Vector& v : cols) m.col(c++) = v;
  return m;
}

Vector unit(long n, long i) {
  Vector v = Vector::Zero(n);
  v(i) = 1.0;
  return v;
}

Subspace random_subspace(Rng& rng, long ambient, long dim) {
  Matrix m(ambient, dim);
  for (long c = 0; c < dim; ++c) m.col(c) = rng.gaussian_vector(ambient);
  return orthonormal_basis(m);
}

}  // namespace

TEST_CASE("orthonormal_basis rank decisions") {
  const Vector e1 = unit(3, 0), e2 = unit(3, 1);

  SUBCASE("duplicate column") {
    const Subspace s = orthonormal_basis(columns({e1, e1, e2}));
    CHECK(s.dim() == 2);
    CHECK(s.contains(e1, 1e-10));
    CHECK(s.contains(e2, 1e-10));
  }
  SUBCASE("zero matrix") {
    CHECK(orthonormal_basis(Matrix::Zero(3, 2)).dim() == 0);
  }
  SUBCASE("column below the default relative tolerance") {
    const Subspace s = orthonormal_basis(columns({e1, e1 + 1e-15 * e2}));
    CHECK(s.dim() == 1);
  }
  SUBCASE("non-finite input rejected") {
    Matrix bad = Matrix::Zero(2, 1);
    bad(0, 0) = std::nan("");
    CHECK_THROWS_AS(orthonormal_basis(bad), NonFiniteError);
  }
}

TEST_CASE("subspace intersection") {
  const Vector e1 = unit(3, 0), e2 = unit(3, 1), e3 = unit(3, 2);
  const Subspace a = orthonormal_basis(columns({e1, e2}));
  const Subspace b = orthonormal_basis(columns({e2, e3}));

  const Subspace meet = subspace_intersect(a, b);
  CHECK(meet.dim() == 1);
  CHECK(meet.contains(e2, 1e-9));

  CHECK(subspace_intersect(a, a).dim() == a.dim());
  CHECK(subspace_distance(subspace_intersect(a, a), a) < 1e-10);

  const Subspace l1 = orthonormal_basis(columns({e1}));
  const Subspace l2 = orthonormal_basis(columns({e2}));
  CHECK(subspace_intersect(l1, l2).dim() == 0);

  CHECK_THROWS_AS(subspace_intersect(l1, Subspace::zero(4)), DimensionError);
}

TEST_CASE("sum and complement") {
  const Vector e1 = unit(3, 0), e2 = unit(3, 1);
  const Subspace l1 = orthonormal_basis(columns({e1}));
  const Subspace l2 = orthonormal_basis(columns({e2}));

  const Subspace sum = subspace_sum(l1, l2);
  CHECK(sum.dim() == 2);

  const Subspace comp = complement(l1);
  CHECK(comp.dim() == 2);
  CHECK(comp.containment_residual(e1) > 0.9);  // e1 orthogonal to the complement

  CHECK(complement(Subspace::full(4)).dim() == 0);
  CHECK(complement(Subspace::zero(4)).dim() == 4);
}

TEST_CASE("intersection and sum dimensions are consistent") {
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const long n = 6;
    const Subspace shared = random_subspace(rng, n, 2);
    Matrix ma(n, 3), mb(n, 3);
    ma.leftCols(2) = shared.basis();
    ma.col(2) = rng.gaussian_vector(n);
    mb.leftCols(2) = shared.basis();
    mb.col(2) = rng.gaussian_vector(n);
    const Subspace a = orthonormal_basis(ma);
    const Subspace b = orthonormal_basis(mb);

    const Subspace meet = subspace_intersect(a, b);
    const Subspace join = subspace_sum(a, b);
    CHECK(meet.dim() + join.dim() == a.dim() + b.dim());
    CHECK(meet.containment_residual(shared.basis().col(0)) < 1e-7);
    CHECK(a.containment_residual(meet) < 1e-7);
    CHECK(b.containment_residual(meet) < 1e-7);
  }
}

TEST_CASE("projectors are idempotent and symmetric") {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const Subspace s = random_subspace(rng, 5, 1 + static_cast<long>(trial % 4));
    const Matrix p = s.projector();
    CHECK((p * p - p).lpNorm<Eigen::Infinity>() < 1e-10);
    CHECK((p - p.transpose()).lpNorm<Eigen::Infinity>() < 1e-10);
  }
}

TEST_CASE("matrix exponential") {
  SUBCASE("quarter-turn rotation") {
    Matrix a(2, 2);
    a << 0.0, -M_PI_2, M_PI_2, 0.0;
    Matrix expected(2, 2);
    expected << 0.0, -1.0, 1.0, 0.0;
    CHECK((mat_exp(a) - expected).lpNorm<Eigen::Infinity>() < 1e-12);
  }
  SUBCASE("exp of zero") {
    CHECK((mat_exp(Matrix::Zero(3, 3)) - Matrix::Identity(3, 3)).lpNorm<Eigen::Infinity>() ==
          0.0);
  }
  SUBCASE("diagonal") {
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = 2.0;
    const Matrix e = mat_exp(d);
    CHECK(e(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
    CHECK(e(1, 1) == doctest::Approx(std::exp(2.0)).epsilon(1e-14));
    CHECK(std::abs(e(0, 1)) + std::abs(e(1, 0)) == 0.0);
  }
  SUBCASE("skew input gives orthogonal output") {
    Rng rng(3);
    Matrix a(4, 4);
    for (long i = 0; i < 4; ++i)
      for (long j = 0; j < 4; ++j) a(i, j) = rng.gaussian();
    const Matrix skew = a - a.transpose();
    const Matrix g = mat_exp(skew);
    CHECK((g.transpose() * g - Matrix::Identity(4, 4)).lpNorm<Eigen::Infinity>() < 1e-12);
  }
  SUBCASE("inverse property up to norm 10") {
    Rng rng(11);
    for (int trial = 0; trial < 8; ++trial) {
      Matrix a(3, 3);
      for (long i = 0; i < 3; ++i)
        for (long j = 0; j < 3; ++j) a(i, j) = rng.gaussian();
      a *= 10.0 / std::max(1.0, a.norm());
      const Matrix prod = mat_exp(-a) * mat_exp(a);
      CHECK((prod - Matrix::Identity(3, 3)).lpNorm<Eigen::Infinity>() < 1e-10);
    }
  }
  SUBCASE("non-square rejected") {
    CHECK_THROWS_AS(mat_exp(Matrix::Zero(2, 3)), DimensionError);
  }
}

TEST_CASE("commutator") {
  Matrix x12 = Matrix::Zero(3, 3), x13 = Matrix::Zero(3, 3), x23 = Matrix::Zero(3, 3);
  x12(0, 1) = 1.0;
  x12(1, 0) = -1.0;
  x13(0, 2) = 1.0;
  x13(2, 0) = -1.0;
  x23(1, 2) = 1.0;
  x23(2, 1) = -1.0;

  CHECK((commutator(x12, x13) + x23).lpNorm<Eigen::Infinity>() < 1e-15);
  CHECK(commutator(x12, x12).lpNorm<Eigen::Infinity>() == 0.0);

  Matrix d1 = Matrix::Zero(2, 2), d2 = Matrix::Zero(2, 2);
  d1.diagonal() << 1.0, 2.0;
  d2.diagonal() << 3.0, 4.0;
  CHECK(commutator(d1, d2).lpNorm<Eigen::Infinity>() == 0.0);

  SUBCASE("Jacobi identity residual") {
    Rng rng(13);
    for (int trial = 0; trial < 5; ++trial) {
      Matrix a(3, 3), b(3, 3), c(3, 3);
      for (long i = 0; i < 3; ++i) {
        for (long j = 0; j < 3; ++j) {
          a(i, j) = rng.gaussian();
          b(i, j) = rng.gaussian();
          c(i, j) = rng.gaussian();
        }
      }
      const Matrix jac = commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) +
                         commutator(c, commutator(a, b));
      CHECK(jac.norm() < 1e-12 * a.norm() * b.norm() * c.norm());
    }
  }
}

TEST_CASE("degenerate inputs are legal") {
  const Subspace z = Subspace::zero(3);
  CHECK(z.dim() == 0);
  CHECK(subspace_sum(z, z).dim() == 0);
  CHECK(subspace_intersect(z, Subspace::full(3)).dim() == 0);
  CHECK(mat_exp(Matrix(0, 0)).size() == 0);
}
