#include "copolab/resolution.hpp"

#include "copolab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace copolab {

namespace {

/// Orthonormal basis of symmetric q x q matrices, Frobenius inner product.
std::vector<Matrix> symmetric_basis(long q) {
  std::vector<Matrix> basis;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (long i = 0; i < q; ++i) {
    for (long j = i; j < q; ++j) {
      Matrix e = Matrix::Zero(q, q);
      if (i == j) {
        e(i, i) = 1.0;
      } else {
        e(i, j) = inv_sqrt2;
        e(j, i) = inv_sqrt2;
      }
      basis.push_back(std::move(e));
    }
  }
  return basis;
}

Vector sym_coords(const Matrix& s, const std::vector<Matrix>& basis) {
  Vector v(static_cast<long>(basis.size()));
  for (std::size_t r = 0; r < basis.size(); ++r) {
    v(static_cast<long>(r)) = (s.cwiseProduct(basis[r])).sum();
  }
  return v;
}

Matrix from_sym_coords(const Vector& v, const std::vector<Matrix>& basis, long q) {
  Matrix s = Matrix::Zero(q, q);
  for (std::size_t r = 0; r < basis.size(); ++r) {
    if (v(static_cast<long>(r)) != 0.0) s += v(static_cast<long>(r)) * basis[r];
  }
  return s;
}

double min_eig(const Matrix& s) {
  if (s.rows() == 0) return std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  return es.eigenvalues()(0);
}

double normalized_min_eig(const Matrix& s) {
  const double norm = s.norm();
  if (norm <= 0.0) return -std::numeric_limits<double>::infinity();
  return min_eig(s / norm);
}

}  // namespace

TripleDatum make_triple_datum(const StructureConstants& sc, const Subspace& h_alg,
                              const Subspace& n_alg, const TolerancePolicy& policy) {
  policy.validate();
  if (h_alg.ambient_dim() != sc.d || n_alg.ambient_dim() != sc.d) {
    throw DimensionError("triple datum: subspace ambient dimension must equal dim g");
  }
  const double h_in_n = n_alg.containment_residual(h_alg);
  if (h_in_n >= policy.containment_tol) {
    throw PreconditionError("triple datum: h is not contained in n", h_in_n);
  }
  const auto closure_residual = [&](const Subspace& sub) {
    double worst = 0.0;
    for (long a = 0; a < sub.dim(); ++a) {
      for (long b = a + 1; b < sub.dim(); ++b) {
        const Vector br = sc.bracket(Vector(sub.basis().col(a)), Vector(sub.basis().col(b)));
        worst = std::max(worst, sub.containment_residual(br));
      }
    }
    return worst;
  };
  const double h_closed = closure_residual(h_alg);
  if (h_closed >= policy.containment_tol) {
    throw PreconditionError("triple datum: h is not closed under the bracket", h_closed);
  }
  const double n_closed = closure_residual(n_alg);
  if (n_closed >= policy.containment_tol) {
    throw PreconditionError("triple datum: n is not closed under the bracket", n_closed);
  }
  double ideal_res = 0.0;
  for (long a = 0; a < n_alg.dim(); ++a) {
    for (long b = 0; b < h_alg.dim(); ++b) {
      const Vector br = sc.bracket(Vector(n_alg.basis().col(a)), Vector(h_alg.basis().col(b)));
      ideal_res = std::max(ideal_res, h_alg.containment_residual(br));
    }
  }
  if (ideal_res >= policy.containment_tol) {
    throw PreconditionError("triple datum: h is not an ideal of n", ideal_res);
  }
  return TripleDatum{sc, h_alg, n_alg, policy};
}

long resolution_isotropy(const LieRep& rep, const ReductionData& red, const Vector& s_point) {
  const double res = red.cand.sigma.containment_residual(s_point);
  if (res >= rep.policy().containment_tol) {
    throw PreconditionError("resolution_isotropy: point is not in the section", res);
  }
  const PointContext ctx = analyze_point(rep, s_point);
  return subspace_intersect(red.normalizer_alg, ctx.isotropy_alg, rep.policy()).dim();
}

DiffeoCriterion local_diffeo_criterion(const LieRep& rep, const ReductionData& red,
                                       const Vector& s_point) {
  const TolerancePolicy& policy = rep.policy();
  const double res = red.cand.sigma.containment_residual(s_point);
  if (res >= policy.containment_tol) {
    throw PreconditionError("local_diffeo_criterion: point is not in the section", res);
  }
  const PointContext ctx = analyze_point(rep, s_point);

  DiffeoCriterion out;
  out.sum_is_full =
      subspace_sum(ctx.orbit_tangent, red.cand.sigma, policy).dim() == rep.ambient_dim();
  out.normal_residual = red.cand.sigma.containment_residual(ctx.normal);
  out.normal_contained = out.normal_residual < policy.containment_tol;
  const long surviving = subspace_intersect(red.normalizer_alg, ctx.isotropy_alg, policy).dim();
  out.isotropy_preserved = surviving == ctx.isotropy_alg.dim();
  return out;
}

DimensionAudit dimension_audit(const LieRep& rep, const ReductionData& red, int samples,
                               std::uint64_t seed) {
  if (samples < 1) throw InputError("dimension_audit: samples must be >= 1");
  DimensionAudit audit;
  const Subspace& sigma = red.cand.sigma;
  const long ambient = rep.ambient_dim();
  const long max_dim = principal_orbit_dim(rep, std::max(samples, 100), seed);
  const long max_reduced = principal_orbit_dim(red.reduced_rep, std::max(samples, 100), seed);

  Rng rng(Rng::mix(seed, 0xa0d1));
  int found = 0;
  for (int attempt = 0; attempt < 50 * samples && found < samples; ++attempt) {
    const Vector coords = rng.gaussian_vector(sigma.dim());
    const Vector s = sigma.basis() * coords;
    const PointContext ctx = analyze_point(rep, s);
    if (ctx.orbit_dim() != max_dim) continue;
    ++found;
    DimensionAuditRow row;
    row.point = s;
    row.orbit_dim = ctx.orbit_dim();
    row.reduced_orbit_dim = analyze_point(red.reduced_rep, coords).orbit_dim();
    row.identity_holds =
        ambient == sigma.dim() + (row.orbit_dim - row.reduced_orbit_dim);
    audit.rows.push_back(std::move(row));
  }

  const long reduced_principal_isotropy = red.reduced_rep.dim() - max_reduced;
  const long cohom = ambient - max_dim;
  audit.chain_identity =
      sigma.dim() == cohom + red.weyl_dim - reduced_principal_isotropy;
  audit.pass = audit.chain_identity && !audit.rows.empty() &&
               std::all_of(audit.rows.begin(), audit.rows.end(),
                           [](const DimensionAuditRow& r) { return r.identity_holds; });
  return audit;
}

MetricSolution gw_metric(const TripleDatum& td, int max_sweeps) {
  const TolerancePolicy& policy = td.policy;
  const Subspace comp = complement(td.h_alg, policy);  // realizes g/h
  const long q = comp.dim();
  MetricSolution sol;
  sol.s = Matrix::Zero(q, q);

  if (q == 0) {
    sol.feasible = true;
    sol.min_eig = std::numeric_limits<double>::infinity();
    sol.solution_space_dim = 0;
    return sol;
  }

  const auto sym_basis = symmetric_basis(q);
  const long sdim = static_cast<long>(sym_basis.size());

  // Quotient actions of the n-basis.
  std::vector<Matrix> quotient_ads;
  for (long a = 0; a < td.n_alg.dim(); ++a) {
    const Matrix ad_full = td.sc.ad(Vector(td.n_alg.basis().col(a)));
    quotient_ads.push_back(comp.basis().transpose() * ad_full * comp.basis());
  }

  Subspace solution_space = Subspace::full(sdim);
  if (!quotient_ads.empty()) {
    Matrix constraints(static_cast<long>(quotient_ads.size()) * sdim, sdim);
    long row = 0;
    for (const Matrix& ad_q : quotient_ads) {
      for (long r = 0; r < sdim; ++r) {
        const Matrix image = sym_basis[static_cast<std::size_t>(r)] * ad_q +
                             ad_q.transpose() * sym_basis[static_cast<std::size_t>(r)];
        constraints.block(row, r, sdim, 1) = sym_coords(image, sym_basis);
      }
      row += sdim;
    }
    solution_space = nullspace(constraints, policy);
  }
  sol.solution_space_dim = solution_space.dim();
  if (solution_space.dim() == 0) {
    sol.feasible = false;
    return sol;
  }

  // Start from the projection of the identity onto the solution space.
  const Vector id_coords = sym_coords(Matrix::Identity(q, q), sym_basis);
  Vector coords = solution_space.basis() * (solution_space.basis().transpose() * id_coords);
  if (coords.norm() < 1e-12) coords = solution_space.basis().col(0);

  auto score = [&](const Vector& c) {
    const Matrix s = from_sym_coords(c, sym_basis, q);
    return normalized_min_eig(s);
  };

  double best = score(coords);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool improved = false;
    for (long r = 0; r < solution_space.dim(); ++r) {
      const Vector dir = solution_space.basis().col(r);
      double best_t = 0.0;
      double best_local = best;
      for (int grid = -20; grid <= 20; ++grid) {
        const double t = 0.15 * grid;
        if (t == 0.0) continue;
        const double trial = score(coords + t * dir);
        if (trial > best_local + 1e-15) {
          best_local = trial;
          best_t = t;
        }
      }
      // Golden-section refinement around the best grid point.
      if (best_t != 0.0) {
        double lo = best_t - 0.15, hi = best_t + 0.15;
        for (int it = 0; it < 40; ++it) {
          const double m1 = lo + 0.381966 * (hi - lo);
          const double m2 = hi - 0.381966 * (hi - lo);
          if (score(coords + m1 * dir) < score(coords + m2 * dir)) {
            lo = m1;
          } else {
            hi = m2;
          }
        }
        const double t_star = 0.5 * (lo + hi);
        const double refined = score(coords + t_star * dir);
        if (refined > best + 1e-15) {
          coords += t_star * dir;
          coords /= coords.norm();
          best = score(coords);
          improved = true;
        }
      }
    }
    if (!improved) break;
  }

  Matrix s = from_sym_coords(coords, sym_basis, q);
  s /= s.norm();
  sol.s = s;
  sol.min_eig = min_eig(s);
  sol.feasible = sol.min_eig > 1e-10;

  double skew = 0.0;
  for (const Matrix& ad_q : quotient_ads) {
    skew = std::max(skew, (Matrix(s * ad_q + ad_q.transpose() * s)).lpNorm<Eigen::Infinity>());
  }
  sol.skew_residual = skew;
  return sol;
}

IsometryCheck metric_isometry_check(const TripleDatum& td, const MetricSolution& sol) {
  if (!sol.feasible) {
    throw PreconditionError("metric_isometry_check requires a feasible metric", 0.0);
  }
  const TolerancePolicy& policy = td.policy;
  const Subspace comp = complement(td.h_alg, policy);  // g/h coordinates
  const long q = comp.dim();
  const Matrix& s = sol.s;

  IsometryCheck out;
  // n/h inside g/h.
  const Matrix u_raw = comp.basis().transpose() * td.n_alg.basis();
  const Subspace u = orthonormal_basis(u_raw, policy);

  // S-orthogonal complement of n/h in g/h.
  const Subspace v = u.dim() == 0 ? Subspace::full(q)
                                  : nullspace(Matrix(u.basis().transpose() * s), policy);

  // Standard complement of n realizes g/n.
  const Subspace gn = complement(td.n_alg, policy);
  out.compared_dim = gn.dim();
  if (gn.dim() == 0) {
    out.pass = true;
    return out;
  }
  if (v.dim() != gn.dim()) {
    out.residual = std::numeric_limits<double>::infinity();
    out.pass = false;
    return out;
  }

  // Route 1: push the metric on V forward through the class map V -> g/n.
  const Matrix class_map = gn.basis().transpose() * (comp.basis() * v.basis());
  const Matrix gram_v = v.basis().transpose() * s * v.basis();
  const Matrix class_inv = class_map.inverse();
  const Matrix g1 = class_inv.transpose() * gram_v * class_inv;

  // Route 2: submersed quotient metric via S-horizontal lifts of the
  // standard complement basis.
  Matrix g2(gn.dim(), gn.dim());
  Matrix lifts(q, gn.dim());
  Matrix usu_inv;
  if (u.dim() > 0) {
    usu_inv = (u.basis().transpose() * s * u.basis()).inverse();
  }
  for (long i = 0; i < gn.dim(); ++i) {
    Vector lift = comp.basis().transpose() * gn.basis().col(i);
    if (u.dim() > 0) {
      const Vector fiber_part = usu_inv * (u.basis().transpose() * s * lift);
      lift -= u.basis() * fiber_part;
    }
    lifts.col(i) = lift;
  }
  g2 = lifts.transpose() * s * lifts;

  out.residual = (g1 - g2).lpNorm<Eigen::Infinity>();
  out.pass = out.residual < 1e-9;
  return out;
}

}  // namespace copolab
