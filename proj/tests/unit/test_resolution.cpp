#include "copolab/resolution.hpp"

#include "builders.hpp"
#include "copolab/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace copolab;
using copolab::testing::so_diag_rep;
using copolab::testing::so_generators;
using copolab::testing::torus_rep;

namespace {

Subspace coeff_span(long d, std::initializer_list<long> indices) {
  Matrix m = Matrix::Zero(d, static_cast<long>(indices.size()));
  long c = 0;
  for (long idx : indices) m(idx, c++) = 1.0;
  return orthonormal_basis(m);
}

StructureConstants so3_constants() {
  return LieRep(3, so_generators(3), {}, true).structure();
}

}  // namespace

TEST_CASE("triple datum validation") {
  const StructureConstants sc = so3_constants();
  SUBCASE("a line in the rotation algebra is a valid abelian pair") {
    CHECK_NOTHROW(make_triple_datum(sc, Subspace::zero(3), coeff_span(3, {0})));
  }
  SUBCASE("h must be an ideal of n") {
    CHECK_THROWS_AS(make_triple_datum(sc, coeff_span(3, {0}), Subspace::full(3)),
                    PreconditionError);
  }
  SUBCASE("n must be closed") {
    CHECK_THROWS_AS(make_triple_datum(sc, Subspace::zero(3), coeff_span(3, {0, 1})),
                    PreconditionError);
  }
}

TEST_CASE("resolved isotropy dimensions") {
  const LieRep so3(3, so_generators(3), {}, true);
  const CanonicalAnalysis a = canonical_analysis(so3, 100, 0);
  const ReductionData red = reduction(so3, a.cand);

  SUBCASE("regular points keep their isotropy") {
    const long resolved = resolution_isotropy(so3, red, a.ctx.p);
    CHECK(resolved == analyze_point(so3, a.ctx.p).isotropy_alg.dim());
    CHECK(resolved == 1);
  }
  SUBCASE("the origin sheds isotropy") {
    const long resolved = resolution_isotropy(so3, red, Vector::Zero(3));
    CHECK(resolved == 1);
    CHECK(analyze_point(so3, Vector::Zero(3)).isotropy_alg.dim() == 3);
  }
  SUBCASE("whole-space section changes nothing") {
    SectionCandidate whole;
    whole.sigma = Subspace::full(3);
    whole.anchor = a.ctx.p;
    const ReductionData full_red = reduction(so3, whole);
    Rng rng(5);
    for (int i = 0; i < 5; ++i) {
      const Vector s = rng.gaussian_vector(3);
      CHECK(resolution_isotropy(so3, full_red, s) ==
            analyze_point(so3, s).isotropy_alg.dim());
    }
  }
  SUBCASE("points outside the section are rejected") {
    Vector off(3);
    off << 0.0, 1.0, 0.0;
    const Vector anchor_dir = a.cand.sigma.basis().col(0);
    if (std::abs(anchor_dir(1)) > 0.9) off << 1.0, 0.0, 0.0;
    CHECK_THROWS_AS(resolution_isotropy(so3, red, off), PreconditionError);
  }
}

TEST_CASE("local diffeomorphism criterion") {
  const LieRep so3(3, so_generators(3), {}, true);
  const CanonicalAnalysis a = canonical_analysis(so3, 100, 0);
  const ReductionData red = reduction(so3, a.cand);

  SUBCASE("regular section points pass all three forms") {
    for (double t : {0.5, -1.0, 2.0}) {
      const DiffeoCriterion crit = local_diffeo_criterion(so3, red, Vector(t * a.ctx.p));
      CHECK(crit.consistent());
      CHECK(crit.pass());
    }
  }
  SUBCASE("the origin fails all three forms consistently") {
    const DiffeoCriterion crit = local_diffeo_criterion(so3, red, Vector::Zero(3));
    CHECK(crit.consistent());
    CHECK_FALSE(crit.pass());
    CHECK_FALSE(crit.sum_is_full);
    CHECK_FALSE(crit.normal_contained);
    CHECK_FALSE(crit.isotropy_preserved);
  }
  SUBCASE("free torus region passes everywhere sampled") {
    const LieRep torus = torus_rep();
    const CanonicalAnalysis ta = canonical_analysis(torus, 100, 0);
    const ReductionData tred = reduction(torus, ta.cand);
    Rng rng(9);
    for (int i = 0; i < 25; ++i) {
      Vector s = rng.gaussian_vector(4);
      // keep both radii away from zero
      if (s.head(2).norm() < 0.3 || s.tail(2).norm() < 0.3) continue;
      const DiffeoCriterion crit = local_diffeo_criterion(torus, tred, s);
      CHECK(crit.consistent());
      CHECK(crit.pass());
    }
  }
}

TEST_CASE("resolved isotropy equals full isotropy exactly where the criterion holds") {
  const LieRep so3(3, so_generators(3), {}, true);
  const CanonicalAnalysis a = canonical_analysis(so3, 100, 0);
  const ReductionData red = reduction(so3, a.cand);
  Rng rng(14);
  for (int i = 0; i < 20; ++i) {
    const Vector s = i == 0 ? Vector(Vector::Zero(3))
                            : Vector(rng.uniform(-2.0, 2.0) * a.cand.sigma.basis().col(0));
    const long resolved = resolution_isotropy(so3, red, s);
    const long full = analyze_point(so3, s).isotropy_alg.dim();
    const DiffeoCriterion crit = local_diffeo_criterion(so3, red, s);
    CHECK(resolved <= full);
    CHECK((resolved == full) == crit.pass());
  }
}

TEST_CASE("dimension audit") {
  SUBCASE("polar line section") {
    const LieRep so3(3, so_generators(3), {}, true);
    const CanonicalAnalysis a = canonical_analysis(so3, 100, 0);
    const DimensionAudit audit = dimension_audit(so3, reduction(so3, a.cand), 10, 0);
    CHECK(audit.pass);
    CHECK(audit.chain_identity);
    for (const auto& row : audit.rows) {
      CHECK(row.orbit_dim == 2);
      CHECK(row.reduced_orbit_dim == 0);
    }
  }
  SUBCASE("two stacked copies") {
    const LieRep rep = so_diag_rep(4, 2);
    const CanonicalAnalysis a = canonical_analysis(rep, 100, 0);
    const DimensionAudit audit = dimension_audit(rep, reduction(rep, a.cand), 10, 0);
    CHECK(audit.pass);
    for (const auto& row : audit.rows) {
      CHECK(row.orbit_dim == 5);
      CHECK(row.reduced_orbit_dim == 1);
      CHECK(row.identity_holds);  // 8 = 4 + (5 - 1)
    }
  }
  SUBCASE("whole-space section is the identity audit") {
    const LieRep so3(3, so_generators(3), {}, true);
    const CanonicalAnalysis a = canonical_analysis(so3, 100, 0);
    SectionCandidate whole;
    whole.sigma = Subspace::full(3);
    whole.anchor = a.ctx.p;
    const DimensionAudit audit = dimension_audit(so3, reduction(so3, whole), 10, 0);
    CHECK(audit.pass);
  }
}

TEST_CASE("invariant metric feasibility") {
  const StructureConstants sc = so3_constants();

  SUBCASE("rotation pair admits the bi-invariant metric") {
    const TripleDatum td = make_triple_datum(sc, Subspace::zero(3), coeff_span(3, {0}));
    const MetricSolution sol = gw_metric(td);
    CHECK(sol.feasible);
    CHECK(sol.min_eig > 1e-6);
    CHECK(sol.skew_residual < 1e-8);

    // Oracle: the negative Killing form (a positive multiple of the
    // identity for this basis) satisfies the same constraints.
    Matrix killing = Matrix::Zero(3, 3);
    const Matrix eye = Matrix::Identity(3, 3);
    for (long i = 0; i < 3; ++i) {
      for (long j = 0; j < 3; ++j) {
        killing(i, j) = -(sc.ad(Vector(eye.col(i))) * sc.ad(Vector(eye.col(j)))).trace();
      }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(killing);
    CHECK(es.eigenvalues()(0) > 0.0);
    const Matrix ad0 = sc.ad(Vector(eye.col(0)));
    CHECK((killing * ad0 + ad0.transpose() * killing).lpNorm<Eigen::Infinity>() < 1e-8);
  }
  SUBCASE("h equal to n leaves an invariant-by-construction quotient") {
    const TripleDatum td = make_triple_datum(sc, coeff_span(3, {0}), coeff_span(3, {0}));
    const MetricSolution sol = gw_metric(td);
    CHECK(sol.feasible);
    CHECK(sol.min_eig > 1e-6);
  }
  SUBCASE("abelian algebras accept any product") {
    StructureConstants abelian;
    abelian.d = 3;
    abelian.table.assign(3, Matrix::Zero(3, 3));
    const TripleDatum td = make_triple_datum(abelian, Subspace::zero(3), coeff_span(3, {0, 1}));
    const MetricSolution sol = gw_metric(td);
    CHECK(sol.feasible);
    CHECK(sol.solution_space_dim == 6);
  }
  SUBCASE("group-sampled invariance extends from the algebra") {
    const TripleDatum td = make_triple_datum(sc, Subspace::zero(3), coeff_span(3, {0}));
    const MetricSolution sol = gw_metric(td);
    REQUIRE(sol.feasible);
    const Subspace comp = complement(td.h_alg);
    Rng rng(77);
    for (int i = 0; i < 50; ++i) {
      Matrix w = Matrix::Identity(comp.dim(), comp.dim());
      for (long c = 0; c < td.n_alg.dim(); ++c) {
        const Matrix ad_q = comp.basis().transpose() *
                            td.sc.ad(Vector(td.n_alg.basis().col(c))) * comp.basis();
        w = w * mat_exp(Matrix(rng.uniform(-2.0, 2.0) * ad_q));
      }
      CHECK((w.transpose() * sol.s * w - sol.s).lpNorm<Eigen::Infinity>() < 1e-8);
    }
  }
}

TEST_CASE("quotient isometry of the horizontal complement") {
  const StructureConstants sc = so3_constants();

  SUBCASE("n equal to g is vacuous") {
    const TripleDatum td = make_triple_datum(sc, Subspace::zero(3), Subspace::full(3));
    const MetricSolution sol = gw_metric(td);
    REQUIRE(sol.feasible);
    const IsometryCheck iso = metric_isometry_check(td, sol);
    CHECK(iso.pass);
    CHECK(iso.compared_dim == 0);
  }
  SUBCASE("rotation pair") {
    const TripleDatum td = make_triple_datum(sc, Subspace::zero(3), coeff_span(3, {0}));
    const MetricSolution sol = gw_metric(td);
    REQUIRE(sol.feasible);
    const IsometryCheck iso = metric_isometry_check(td, sol);
    CHECK(iso.pass);
    CHECK(iso.residual < 1e-9);
    CHECK(iso.compared_dim == 2);
  }
  SUBCASE("abelian case with the identity metric") {
    StructureConstants abelian;
    abelian.d = 4;
    abelian.table.assign(4, Matrix::Zero(4, 4));
    const TripleDatum td = make_triple_datum(abelian, coeff_span(4, {3}), coeff_span(4, {2, 3}));
    const MetricSolution sol = gw_metric(td);
    REQUIRE(sol.feasible);
    const IsometryCheck iso = metric_isometry_check(td, sol);
    CHECK(iso.pass);
    CHECK(iso.compared_dim == 2);
  }
}
