#include "copolab/sections.hpp"

#include "copolab/parallel.hpp"
#include "copolab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace copolab {

namespace {

Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

bool fixes_point(const Matrix& g, const Vector& p, double tol) {
  return (g * p - p).norm() < tol * std::max(1.0, p.norm());
}

}  // namespace

bool SliceInequalityReport::all_pass() const {
  for (const auto& r : points) {
    if (!r.inequality_holds || !r.vq_axiom_c_pass) return false;
  }
  return true;
}

SectionCandidate canonical_section(const LieRep& rep, const PointContext& ctx) {
  if (!ctx.regular) {
    throw PreconditionError("canonical_section: anchor point is not certified regular", 0.0);
  }
  const long n = rep.ambient_dim();
  const TolerancePolicy& policy = rep.policy();

  std::vector<Matrix> rows;
  for (long r = 0; r < ctx.isotropy_alg.dim(); ++r) {
    rows.push_back(rep.combine(Vector(ctx.isotropy_alg.basis().col(r))));
  }
  int discrete_used = 0;
  for (const Matrix& e : rep.discrete_elements()) {
    if (fixes_point(e, ctx.p, policy.containment_tol)) {
      rows.push_back(e - Matrix::Identity(n, n));
      ++discrete_used;
    }
  }

  SectionCandidate cand;
  cand.source = SectionCandidate::Source::canonical;
  cand.anchor = ctx.p;
  cand.discrete_fixes_used = discrete_used;
  if (rows.empty()) {
    cand.sigma = Subspace::full(n);
    return cand;
  }
  Matrix stack(static_cast<long>(rows.size()) * n, n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    stack.middleRows(static_cast<long>(i) * n, n) = rows[i];
  }
  cand.sigma = nullspace(stack, policy);
  return cand;
}

int copolarity(const LieRep& rep, const SectionCandidate& cand, const PointContext& ctx) {
  if (!ctx.regular) {
    throw PreconditionError("copolarity: anchor point is not certified regular", 0.0);
  }
  const double res = cand.sigma.containment_residual(ctx.p);
  if (res >= rep.policy().containment_tol) {
    throw PreconditionError("copolarity: anchor point is not in the section", res);
  }
  return static_cast<int>(
      subspace_intersect(ctx.orbit_tangent, cand.sigma, rep.policy()).dim());
}

namespace {

/// Seeded search for normalizer elements outside the identity component:
/// descend ||(I - P) g(t) Q||_F^2 from random chart points, keep converged
/// elements, and deduplicate modulo the identity component of the induced
/// action on sigma.
std::vector<Matrix> discover_weyl_components(const LieRep& rep, const Subspace& sigma,
                                             const LieRep& reduced, int restarts,
                                             std::uint64_t seed) {
  std::vector<Matrix> components;
  if (restarts <= 0 || rep.dim() == 0 || sigma.dim() == 0 ||
      sigma.dim() == sigma.ambient_dim()) {
    return components;
  }
  const long n = rep.ambient_dim();
  const long s = sigma.dim();
  const Matrix away = Matrix::Identity(n, n) - sigma.projector();
  const Matrix zero_targets = Matrix::Zero(n, s);
  const Matrix eye_s = Matrix::Identity(s, s);

  const auto same_coset = [&](const Matrix& u, const Matrix& w) {
    const Matrix gap = u.transpose() * w;
    if (reduced.dim() == 0) {
      return (gap - eye_s).lpNorm<Eigen::Infinity>() < 1e-6;
    }
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < 4; ++r) {
      Rng rng(Rng::mix(seed, 0xc05e + 31 * r));
      Vector t0 = r == 0 ? Vector(Vector::Zero(reduced.dim()))
                         : rng.uniform_vector(reduced.dim(), -M_PI, M_PI);
      best = std::min(best, descend_group_targets(reduced, nullptr, eye_s, gap,
                                                  std::move(t0))
                                .value);
      if (best < 1e-12) break;
    }
    return best < 1e-12;
  };

  for (int r = 0; r < restarts && components.size() < 7; ++r) {
    Rng rng(Rng::mix(seed, 0x5ea2c4 + r));
    const DescendResult found = descend_group_targets(
        rep, &away, sigma.basis(), zero_targets, rng.uniform_vector(rep.dim(), -M_PI, M_PI));
    if (found.value >= 1e-16) continue;
    const Matrix g = mat_exp(rep.combine(found.t));
    const Matrix w = sigma.basis().transpose() * g * sigma.basis();
    if ((w.transpose() * w - eye_s).lpNorm<Eigen::Infinity>() >= 1e-9) continue;
    if (same_coset(eye_s, w)) continue;
    bool fresh = true;
    for (const Matrix& known : components) {
      if (same_coset(known, w)) {
        fresh = false;
        break;
      }
    }
    if (fresh) components.push_back(w);
  }
  return components;
}

}  // namespace

ReductionData reduction(const LieRep& rep, const SectionCandidate& cand,
                        int component_search, std::uint64_t seed) {
  const long n = rep.ambient_dim();
  const long d = rep.dim();
  const TolerancePolicy& policy = rep.policy();
  const Matrix proj = cand.sigma.projector();
  const Matrix anti = Matrix::Identity(n, n) - proj;

  Matrix norm_rows(n * n, d);
  Matrix cent_rows(n * n, d);
  for (long i = 0; i < d; ++i) {
    norm_rows.col(i) = vec(Matrix(anti * rep.generators()[i] * proj));
    cent_rows.col(i) = vec(Matrix(rep.generators()[i] * proj));
  }
  const Subspace normalizer = d == 0 ? Subspace::zero(0) : nullspace(norm_rows, policy);
  const Subspace centralizer = d == 0 ? Subspace::zero(0) : nullspace(cent_rows, policy);

  // Complement of the centralizer inside the normalizer.
  Matrix residue = normalizer.basis();
  if (centralizer.dim() > 0 && residue.cols() > 0) {
    residue -= centralizer.basis() * (centralizer.basis().transpose() * residue);
  }
  const Subspace weyl_directions = orthonormal_basis(residue, policy);

  const Matrix& q = cand.sigma.basis();
  const long s = cand.sigma.dim();
  std::vector<Matrix> reduced_gens;
  for (long c = 0; c < weyl_directions.dim(); ++c) {
    const Matrix a = rep.combine(Vector(weyl_directions.basis().col(c)));
    reduced_gens.push_back(q.transpose() * a * q);
  }
  LieRep reduced(s, reduced_gens, policy, rep.orthogonal());

  std::vector<Matrix> components =
      discover_weyl_components(rep, cand.sigma, reduced, component_search, seed);
  if (!components.empty()) {
    reduced = LieRep(s, std::move(reduced_gens), policy, rep.orthogonal(),
                     std::move(components));
  }

  ReductionData red{cand, normalizer, centralizer,
                    static_cast<int>(normalizer.dim() - centralizer.dim()),
                    std::move(reduced)};
  return red;
}

DePair de_decompose(const LieRep& rep, const SectionCandidate& cand, const Vector& q) {
  const TolerancePolicy& policy = rep.policy();
  const double res = cand.sigma.containment_residual(q);
  if (res >= policy.containment_tol) {
    throw PreconditionError("de_decompose: point is not in the section", res);
  }
  const PointContext ctx = analyze_point(rep, q);

  DePair pair;
  pair.d = subspace_intersect(ctx.orbit_tangent, cand.sigma, policy);
  pair.e = subspace_intersect(ctx.orbit_tangent, complement(cand.sigma, policy), policy);
  pair.decomposes = pair.d.dim() + pair.e.dim() == ctx.orbit_dim();
  if (pair.d.dim() > 0 && pair.e.dim() > 0) {
    pair.orthogonality_residual =
        (pair.d.basis().transpose() * pair.e.basis()).lpNorm<Eigen::Infinity>();
  }
  return pair;
}

InvarianceReport check_totally_geodesic(const LieRep& rep, const SectionCandidate& cand,
                                        const Vector& q) {
  const TolerancePolicy& policy = rep.policy();
  const PointContext ctx = analyze_point(rep, q);
  const DePair pair = de_decompose(rep, cand, q);

  InvarianceReport report;
  const Subspace eta_space = subspace_intersect(ctx.normal, cand.sigma, policy);
  const Matrix& t_basis = ctx.orbit_tangent.basis();

  // D and E in orbit-tangent coordinates.
  const Matrix d_coords = t_basis.transpose() * pair.d.basis();
  const Matrix e_coords = t_basis.transpose() * pair.e.basis();
  const long m = ctx.orbit_dim();
  const Matrix pd = d_coords * d_coords.transpose();
  const Matrix pe = e_coords * e_coords.transpose();

  double worst = 0.0;
  for (long l = 0; l < eta_space.dim(); ++l) {
    const Matrix av = shape_operator(rep, ctx, Vector(eta_space.basis().col(l)));
    const double scale = std::max(1.0, av.lpNorm<Eigen::Infinity>());
    if (pair.d.dim() > 0) {
      const Matrix leak_d = (Matrix::Identity(m, m) - pd) * av * pd;
      worst = std::max(worst, leak_d.lpNorm<Eigen::Infinity>() / scale);
    }
    if (pair.e.dim() > 0) {
      const Matrix leak_e = (Matrix::Identity(m, m) - pe) * av * pe;
      worst = std::max(worst, leak_e.lpNorm<Eigen::Infinity>() / scale);
    }
  }
  report.directions_checked = eta_space.dim();
  report.max_residual = worst;
  report.decomposition_ok = pair.decomposes;
  report.pass = pair.decomposes && worst < 1e-8;
  return report;
}

AxiomReport verify_axioms(const LieRep& rep, const SectionCandidate& cand, int samples,
                          std::uint64_t seed) {
  if (samples < 1) throw InputError("verify_axioms: samples must be >= 1");
  const long n = rep.ambient_dim();
  AxiomReport report;
  report.samples = samples;
  report.seed = seed;

  report.a = AxiomCheck{true, 0.0,
                        "linear subspaces are complete, connected and totally geodesic"};

  // (B) every orbit reaches the section: minimize distance from sampled
  // orbits to sigma over the group.
  {
    const Matrix away = Matrix::Identity(n, n) - cand.sigma.projector();
    const Vector zero = Vector::Zero(n);
    std::vector<double> worst(static_cast<std::size_t>(samples), 0.0);
    parallel_for(static_cast<std::size_t>(samples), [&](std::size_t i) {
      Rng rng(Rng::mix(seed, 0xb000 + i));
      const Vector q = rng.gaussian_vector(n);
      double best = std::numeric_limits<double>::infinity();
      const int restarts = 8;
      for (int r = 0; r < restarts; ++r) {
        Vector t0 = r == 0 ? Vector(Vector::Zero(rep.dim()))
                           : rng.uniform_vector(rep.dim(), -M_PI, M_PI);
        best = std::min(best,
                        descend_group_objective(rep, &away, q, zero, std::move(t0)));
        if (best < 1e-14) break;
      }
      worst[i] = std::sqrt(std::max(0.0, best)) / std::max(1.0, q.norm());
    });
    report.b.residual = *std::max_element(worst.begin(), worst.end());
    report.b.pass = report.b.residual < 1e-6;
    report.b.note = "Monte-Carlo orbit-to-section distance";
  }

  // (C) normal spaces of regular points in sigma stay inside sigma.
  {
    Rng rng(Rng::mix(seed, 0xc000));
    const long max_dim = principal_orbit_dim(rep, std::max(samples, 64), seed);
    double worst = 0.0;
    int found = 0;
    for (int attempt = 0; attempt < 20 * samples && found < samples; ++attempt) {
      const Vector q = cand.sigma.dim() == 0
                           ? Vector(Vector::Zero(n))
                           : Vector(cand.sigma.basis() * rng.gaussian_vector(cand.sigma.dim()));
      const PointContext ctx = analyze_point(rep, q);
      if (ctx.orbit_dim() != max_dim) continue;
      ++found;
      worst = std::max(worst, cand.sigma.containment_residual(ctx.normal));
    }
    report.c.residual = worst;
    report.c.pass = found > 0 && worst < 1e-6;
    report.c.note = found > 0 ? "normal-space containment at sampled regular points"
                              : "no regular points found in the section";
  }

  // (D) invariance under the subgroup generated by the normalizer algebra.
  // Invariance under all of G cannot be decided by finite sampling; the
  // surrogate is recorded as such.
  {
    const ReductionData red = reduction(rep, cand, 0);
    Rng rng(Rng::mix(seed, 0xd000));
    const Matrix proj = cand.sigma.projector();
    const Matrix anti = Matrix::Identity(n, n) - proj;
    double worst = 0.0;
    const int draws = std::min(samples, 50);
    for (int i = 0; i < draws; ++i) {
      Matrix g = Matrix::Identity(n, n);
      for (long c = 0; c < red.normalizer_alg.dim(); ++c) {
        const double t = rng.uniform(-M_PI, M_PI);
        g = g * mat_exp(t * rep.combine(Vector(red.normalizer_alg.basis().col(c))));
      }
      worst = std::max(worst, (anti * g * proj).lpNorm<Eigen::Infinity>());
    }
    report.d.residual = worst;
    report.d.pass = worst < 1e-8;
    report.d.note =
        "verified on the normalizer-generated subgroup only; invariance over "
        "the full group is not finitely verifiable";
  }
  return report;
}

RegularityEquivalenceReport regularity_equivalence(const LieRep& rep,
                                                   const ReductionData& red, int samples,
                                                   std::uint64_t seed) {
  if (samples < 1) throw InputError("regularity_equivalence: samples must be >= 1");
  RegularityEquivalenceReport report;
  report.samples = samples;
  report.seed = seed;

  const Subspace& sigma = red.cand.sigma;
  report.max_orbit_dim = principal_orbit_dim(rep, std::max(samples, 100), seed);
  report.max_reduced_dim = principal_orbit_dim(red.reduced_rep, std::max(samples, 100), seed);

  Rng rng(Rng::mix(seed, 0x3e9));
  for (int i = 0; i < samples; ++i) {
    const Vector coords = rng.gaussian_vector(sigma.dim());
    const Vector q = sigma.basis() * coords;
    const long gdim = analyze_point(rep, q).orbit_dim();
    const long wdim = analyze_point(red.reduced_rep, coords).orbit_dim();
    const bool g_regular = gdim == report.max_orbit_dim;
    const bool w_regular = wdim == report.max_reduced_dim;
    if (g_regular != w_regular) report.counterexamples.push_back(q);
  }
  report.pass = report.counterexamples.empty();
  return report;
}

CanonicalAnalysis canonical_analysis(const LieRep& rep, int trials, std::uint64_t seed) {
  const long n = rep.ambient_dim();
  const long max_dim = principal_orbit_dim(rep, trials, seed);
  const RegularityCertificate cert{max_dim, trials, seed};
  Rng rng(Rng::mix(seed, 0xca0));

  std::vector<PointContext> anchors;
  const auto add_anchor = [&](const Subspace& within) {
    if (within.dim() == 0 && max_dim > 0) return;
    for (int attempt = 0; attempt < std::max(trials, 20); ++attempt) {
      const Vector p = within.dim() == 0
                           ? Vector(Vector::Zero(n))
                           : Vector(within.basis() * rng.gaussian_vector(within.dim()));
      PointContext ctx = analyze_point(rep, p);
      if (ctx.orbit_dim() != max_dim) continue;
      ctx.regular = true;
      ctx.certificate = cert;
      anchors.push_back(std::move(ctx));
      return;
    }
  };

  add_anchor(Subspace::full(n));  // generic anchor first
  if (!rep.discrete_elements().empty()) {
    // Anchors inside the fixed subspaces of the discrete data; only there
    // can the fixed-space constraints participate in the section.
    std::vector<Subspace> fix_spaces;
    Matrix all(n * static_cast<long>(rep.discrete_elements().size()), n);
    long row = 0;
    for (const Matrix& e : rep.discrete_elements()) {
      const Matrix gap = e - Matrix::Identity(n, n);
      fix_spaces.push_back(nullspace(gap, rep.policy()));
      all.middleRows(row, n) = gap;
      row += n;
    }
    if (rep.discrete_elements().size() > 1) {
      fix_spaces.push_back(nullspace(all, rep.policy()));
    }
    for (const Subspace& fix : fix_spaces) add_anchor(fix);
  }
  if (anchors.empty()) {
    throw PreconditionError("canonical_analysis: no regular anchor found", 0.0);
  }

  // Keep candidates whose section contains the anchor's normal space (the
  // construction guarantees this at principal anchors; anchors on
  // exceptional strata fail it) and take the least copolarity.
  bool have = false;
  CanonicalAnalysis best;
  for (PointContext& ctx : anchors) {
    SectionCandidate cand = canonical_section(rep, ctx);
    if (cand.sigma.containment_residual(ctx.normal) >= rep.policy().containment_tol) {
      continue;
    }
    const int copol = copolarity(rep, cand, ctx);
    const bool better =
        !have || copol < best.copol ||
        (copol == best.copol && cand.sigma.dim() < best.cand.sigma.dim());
    if (better) {
      best = CanonicalAnalysis{std::move(ctx), std::move(cand), copol};
      have = true;
    }
  }
  if (!have) {
    throw PreconditionError(
        "canonical_analysis: no anchor produced a section containing its normal space",
        0.0);
  }
  return best;
}

StabilityReport stability_check(const LieRep& rep, const ReductionData& red, int trials,
                                std::uint64_t seed) {
  StabilityReport report;
  const PointContext anchor = analyze_point(rep, red.cand.anchor);
  const long max_dim = principal_orbit_dim(rep, trials, seed);

  {
    PointContext ctx = anchor;
    ctx.regular = ctx.orbit_dim() == max_dim;
    ctx.certificate = RegularityCertificate{max_dim, trials, seed};
    report.copol_original = copolarity(rep, red.cand, ctx);
  }
  report.copol_reduced = canonical_analysis(red.reduced_rep, trials, seed ^ 0x77).copol;
  report.sigma_dim = red.cand.sigma.dim();
  report.cohomogeneity = rep.ambient_dim() - max_dim;
  report.copolarity_stable = report.copol_original == report.copol_reduced;
  report.dimension_identity =
      report.sigma_dim == report.cohomogeneity + report.copol_original;
  return report;
}

SliceInequalityReport slice_inequality(const LieRep& rep, const SectionCandidate& cand,
                                       const std::vector<Vector>& points, int trials,
                                       std::uint64_t seed) {
  const TolerancePolicy& policy = rep.policy();
  SliceInequalityReport report;

  {
    const PointContext anchor_ctx = analyze_point(rep, cand.anchor);
    PointContext ctx = anchor_ctx;
    certify_regular(rep, ctx, trials, seed);
    report.global_copolarity = copolarity(rep, cand, ctx);
  }
  const long max_dim = principal_orbit_dim(rep, trials, seed);

  for (const Vector& q : points) {
    const double res = cand.sigma.containment_residual(q);
    if (res >= policy.containment_tol) {
      throw PreconditionError("slice_inequality: point is not in the section", res);
    }
    SlicePointReport row;
    row.point = q;
    const PointContext ctx = analyze_point(rep, q);
    row.orbit_dim = ctx.orbit_dim();
    row.regular = ctx.orbit_dim() == max_dim;

    const LieRep slice = slice_rep(rep, ctx);
    row.slice_copolarity = slice.dim() == 0
                               ? 0
                               : canonical_analysis(slice, trials, seed ^ 0x51ce).copol;
    row.inequality_holds = row.slice_copolarity <= report.global_copolarity;

    // V_q = nu_q(orbit) intersect sigma, expressed in slice coordinates,
    // must satisfy the normal-space containment axiom inside the slice.
    const Subspace vq_ambient = subspace_intersect(ctx.normal, cand.sigma, policy);
    const Matrix vq_coords = ctx.normal.basis().transpose() * vq_ambient.basis();
    const Subspace vq = orthonormal_basis(vq_coords, policy);
    double worst = 0.0;
    bool checked = false;
    if (vq.dim() > 0 && slice.dim() > 0) {
      Rng rng(Rng::mix(seed, 0x40c));
      const long slice_max = principal_orbit_dim(slice, trials, seed ^ 0x9a);
      int found = 0;
      for (int attempt = 0; attempt < 200 && found < 10; ++attempt) {
        const Vector w = vq.basis() * rng.gaussian_vector(vq.dim());
        const PointContext wctx = analyze_point(slice, w);
        if (wctx.orbit_dim() != slice_max) continue;
        ++found;
        checked = true;
        worst = std::max(worst, vq.containment_residual(wctx.normal));
      }
    }
    row.vq_axiom_c_residual = worst;
    row.vq_axiom_c_pass = !checked || worst < 1e-6;
    report.points.push_back(std::move(row));
  }
  return report;
}

}  // namespace copolab
