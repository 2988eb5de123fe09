#include "copolab/cli.hpp"

#include "copolab/json_io.hpp"
#include "copolab/orbits.hpp"
#include "copolab/resolution.hpp"
#include "copolab/rng.hpp"
#include "copolab/sections.hpp"
#include "copolab/symmpair.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

namespace copolab {

namespace {

using nlohmann::json;

struct ReportBuilder {
  json root;
  bool all_pass = true;

  ReportBuilder(const RunConfig& config, const std::string& digest,
                const TolerancePolicy& policy) {
    root["tool"] = "copolab";
    root["command"] = config.command;
    root["input_digest"] = digest;
    root["seed"] = config.seed;
    root["samples"] = config.samples;
    root["budget"] = config.budget;
    root["tolerances"] = {{"rel_rank_tol", policy.rel_rank_tol},
                          {"abs_zero_tol", policy.abs_zero_tol},
                          {"containment_tol", policy.containment_tol}};
    root["checks"] = json::array();
    root["results"] = json::object();
  }

  void check(const std::string& name, bool pass, json details) {
    details["name"] = name;
    details["pass"] = pass;
    root["checks"].push_back(std::move(details));
    all_pass = all_pass && pass;
  }

  void result(const std::string& key, json value) { root["results"][key] = std::move(value); }
};

json subspace_summary(const Subspace& s) {
  return {{"dim", s.dim()}, {"ambient_dim", s.ambient_dim()}, {"rank_tol_used", s.tol_used()}};
}

void write_atomically(const std::string& path, const std::string& bytes) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot open output file: " + tmp);
    out << bytes;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw InputError("cannot move report into place: " + path);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const LieRep& expect_linear_rep(const ParsedInput& input, const std::string& command) {
  if (!std::holds_alternative<LieRep>(input)) {
    throw InputError(command + " expects a linear_rep input");
  }
  return std::get<LieRep>(input);
}

const SymPairInput& expect_sym_pair(const ParsedInput& input, const std::string& command) {
  if (!std::holds_alternative<SymPairInput>(input)) {
    throw InputError(command + " expects a sym_pair input");
  }
  return std::get<SymPairInput>(input);
}

// ---------------------------------------------------------------------------
// command pipelines
// ---------------------------------------------------------------------------

void run_analyze(const LieRep& rep, const RunConfig& config, ReportBuilder& report) {
  const PointContext ctx = find_regular(rep, config.samples, config.seed);
  report.result("ambient_dim", rep.ambient_dim());
  report.result("algebra_dim", rep.dim());
  report.result("principal_orbit_dim", ctx.certificate->max_orbit_dim);
  report.result("cohomogeneity", rep.ambient_dim() - ctx.certificate->max_orbit_dim);
  report.result("orbit_tangent", subspace_summary(ctx.orbit_tangent));
  report.result("normal_space", subspace_summary(ctx.normal));
  report.result("isotropy_algebra", subspace_summary(ctx.isotropy_alg));
  report.result("regularity_certificate",
                json{{"max_orbit_dim", ctx.certificate->max_orbit_dim},
                     {"samples", ctx.certificate->samples},
                     {"seed", ctx.certificate->seed}});
  report.check("rank_nullity", ctx.orbit_dim() + ctx.isotropy_alg.dim() == rep.dim(),
               {{"orbit_dim", ctx.orbit_dim()},
                {"isotropy_dim", ctx.isotropy_alg.dim()},
                {"algebra_dim", rep.dim()},
                {"tolerance", 0}});
  report.check("tangent_normal_split",
               ctx.orbit_dim() + ctx.normal.dim() == rep.ambient_dim(),
               {{"tangent_dim", ctx.orbit_dim()},
                {"normal_dim", ctx.normal.dim()},
                {"ambient_dim", rep.ambient_dim()},
                {"tolerance", 0}});
}

void run_copolarity(const LieRep& rep, const RunConfig& config, ReportBuilder& report) {
  const CanonicalAnalysis analysis = canonical_analysis(rep, config.samples, config.seed);
  const ReductionData red = reduction(rep, analysis.cand);
  const long cohom = rep.ambient_dim() - analysis.ctx.certificate->max_orbit_dim;

  report.result("copolarity", analysis.copol);
  report.result("section_dim", analysis.cand.sigma.dim());
  report.result("cohomogeneity", cohom);
  report.result("weyl_dim", red.weyl_dim);
  report.result("normalizer_dim", red.normalizer_alg.dim());
  report.result("centralizer_dim", red.centralizer_alg.dim());
  report.result("discrete_fixes_used", analysis.cand.discrete_fixes_used);
  report.result("anchor_orbit_dim", analysis.ctx.orbit_dim());
  report.result("seed", config.seed);
  // Necessary condition for minimality of the computed section; recorded,
  // not enforced.
  report.result("dimension_identity_holds",
                analysis.cand.sigma.dim() == cohom + analysis.copol);

  report.check("weyl_dim_equals_copolarity", red.weyl_dim == analysis.copol,
               {{"weyl_dim", red.weyl_dim}, {"copolarity", analysis.copol}, {"tolerance", 0}});
  report.check(
      "section_contains_anchor_normal_space",
      analysis.cand.sigma.containment_residual(analysis.ctx.normal) <
          rep.policy().containment_tol,
      {{"residual", analysis.cand.sigma.containment_residual(analysis.ctx.normal)},
       {"tolerance", rep.policy().containment_tol}});
}

void run_reduce(const LieRep& rep, const RunConfig& config, ReportBuilder& report) {
  const CanonicalAnalysis analysis = canonical_analysis(rep, config.samples, config.seed);
  const ReductionData red = reduction(rep, analysis.cand);

  report.result("section_dim", analysis.cand.sigma.dim());
  report.result("weyl_dim", red.weyl_dim);
  report.result("reduced_rep_ambient_dim", red.reduced_rep.ambient_dim());
  report.result("reduced_rep_generators", red.reduced_rep.dim());

  const double zc = red.normalizer_alg.containment_residual(red.centralizer_alg);
  report.check("centralizer_inside_normalizer", zc < rep.policy().containment_tol,
               {{"residual", zc}, {"tolerance", rep.policy().containment_tol}});

  const StabilityReport stability = stability_check(rep, red, config.samples, config.seed);
  report.result("copolarity", stability.copol_original);
  report.result("reduced_copolarity", stability.copol_reduced);
  report.check("copolarity_stable_under_reduction", stability.copolarity_stable,
               {{"original", stability.copol_original},
                {"reduced", stability.copol_reduced},
                {"tolerance", 0}});
  report.check("section_dim_identity", stability.dimension_identity,
               {{"section_dim", stability.sigma_dim},
                {"cohomogeneity", stability.cohomogeneity},
                {"copolarity", stability.copol_original},
                {"tolerance", 0}});

  const RegularityEquivalenceReport req =
      regularity_equivalence(rep, red, config.samples, config.seed);
  report.check("regularity_equivalence", req.pass,
               {{"samples", req.samples},
                {"seed", req.seed},
                {"counterexamples", req.counterexamples.size()},
                {"max_orbit_dim", req.max_orbit_dim},
                {"max_reduced_orbit_dim", req.max_reduced_dim},
                {"tolerance", 0}});
}

std::vector<Vector> singular_candidates(const LieRep& rep, const Subspace& sigma, int samples,
                                        std::uint64_t seed) {
  // Deliberate degenerations inside the section; sampling alone almost
  // never lands on a singular stratum.
  std::vector<Vector> points;
  points.push_back(Vector::Zero(rep.ambient_dim()));
  for (long c = 0; c < sigma.dim(); ++c) {
    points.push_back(Vector(sigma.basis().col(c)));
  }
  Rng rng(Rng::mix(seed, 0x519));
  for (int i = 0; i < samples; ++i) {
    if (sigma.dim() < 2) break;
    const long a = static_cast<long>(rng.next_u64() % static_cast<std::uint64_t>(sigma.dim()));
    const long b = static_cast<long>(rng.next_u64() % static_cast<std::uint64_t>(sigma.dim()));
    const double lam = rng.uniform(-2.0, 2.0);
    points.push_back(Vector(sigma.basis().col(a) + lam * sigma.basis().col(b)));
  }
  return points;
}

void run_slice(const LieRep& rep, const RunConfig& config, ReportBuilder& report) {
  const CanonicalAnalysis analysis = canonical_analysis(rep, config.samples, config.seed);
  const long max_dim = analysis.ctx.certificate->max_orbit_dim;

  std::vector<Vector> points;
  {
    // Singular candidates first, then a couple of regular ones: slice
    // copolarity must vanish at regular points.
    const auto candidates =
        singular_candidates(rep, analysis.cand.sigma, std::min(config.samples, 30), config.seed);
    for (const Vector& q : candidates) {
      if (analyze_point(rep, q).orbit_dim() < max_dim) points.push_back(q);
    }
    Rng rng(Rng::mix(config.seed, 0x2e6));
    int regular_added = 0;
    while (regular_added < 2 && analysis.cand.sigma.dim() > 0) {
      const Vector q =
          analysis.cand.sigma.basis() * rng.gaussian_vector(analysis.cand.sigma.dim());
      if (analyze_point(rep, q).orbit_dim() == max_dim) {
        points.push_back(q);
        ++regular_added;
      }
    }
  }

  const SliceInequalityReport slice =
      slice_inequality(rep, analysis.cand, points, config.samples, config.seed);
  report.result("global_copolarity", slice.global_copolarity);
  json rows = json::array();
  bool regular_zero = true;
  for (const auto& row : slice.points) {
    rows.push_back({{"orbit_dim", row.orbit_dim},
                    {"regular", row.regular},
                    {"slice_copolarity", row.slice_copolarity},
                    {"inequality_holds", row.inequality_holds},
                    {"vq_axiom_c_residual", row.vq_axiom_c_residual}});
    if (row.regular && row.slice_copolarity != 0) regular_zero = false;
  }
  report.result("points", std::move(rows));
  report.result("singular_points_examined",
                std::count_if(slice.points.begin(), slice.points.end(),
                              [](const SlicePointReport& r) { return !r.regular; }));
  report.check("slice_copolarity_bounded", slice.all_pass(),
               {{"points", slice.points.size()},
                {"global_copolarity", slice.global_copolarity},
                {"tolerance", 0}});
  report.check("regular_points_have_polar_slices", regular_zero, {{"tolerance", 0}});
}

void run_verify(const LieRep& rep, const RunConfig& config, ReportBuilder& report) {
  const CanonicalAnalysis analysis = canonical_analysis(rep, config.samples, config.seed);
  const AxiomReport axioms = verify_axioms(rep, analysis.cand, config.samples, config.seed);

  report.result("section_dim", analysis.cand.sigma.dim());
  report.result("copolarity", analysis.copol);
  report.check("axiom_totally_geodesic", axioms.a.pass,
               {{"note", axioms.a.note}, {"tolerance", 0}});
  report.check("axiom_meets_every_orbit", axioms.b.pass,
               {{"residual", axioms.b.residual},
                {"tolerance", 1e-6},
                {"samples", axioms.samples},
                {"seed", axioms.seed},
                {"note", axioms.b.note}});
  report.check("axiom_normal_containment", axioms.c.pass,
               {{"residual", axioms.c.residual},
                {"tolerance", 1e-6},
                {"samples", axioms.samples},
                {"seed", axioms.seed},
                {"note", axioms.c.note}});
  report.check("axiom_invariance_surrogate", axioms.d.pass,
               {{"residual", axioms.d.residual},
                {"tolerance", 1e-8},
                {"note", axioms.d.note}});

  // D/E decomposition and shape-operator invariance at sampled regular
  // points of the section.
  Rng rng(Rng::mix(config.seed, 0xde0));
  const long max_dim = analysis.ctx.certificate->max_orbit_dim;
  double worst_invariance = 0.0;
  bool decomposes = true;
  int examined = 0;
  for (int attempt = 0; attempt < 10 * config.samples && examined < std::min(config.samples, 25);
       ++attempt) {
    const Vector q =
        analysis.cand.sigma.basis() * rng.gaussian_vector(analysis.cand.sigma.dim());
    if (analyze_point(rep, q).orbit_dim() != max_dim) continue;
    ++examined;
    const DePair pair = de_decompose(rep, analysis.cand, q);
    decomposes = decomposes && pair.decomposes && pair.orthogonality_residual < 1e-8;
    const InvarianceReport inv = check_totally_geodesic(rep, analysis.cand, q);
    worst_invariance = std::max(worst_invariance, inv.max_residual);
  }
  report.result("decomposition_points_examined", examined);
  report.check("orbit_tangent_decomposes", decomposes && examined > 0,
               {{"points", examined}, {"tolerance", 1e-8}});
  report.check("shape_operator_invariance", worst_invariance < 1e-8 && examined > 0,
               {{"max_residual", worst_invariance}, {"tolerance", 1e-8}});
}

void run_sympair(const SymPairInput& input, const TolerancePolicy& policy,
                 const RunConfig& config, ReportBuilder& report) {
  const SymPair pair =
      cartan_decompose(input.sc, input.inner, input.sigma_inv, policy, input.embedding);
  report.result("algebra_dim", pair.sc.d);
  report.result("k_dim", pair.k_space.dim());
  report.result("p_dim", pair.p_space.dim());
  report.check("cartan_grading", true,
               {{"note", "validated during decomposition"},
                {"tolerance", policy.containment_tol}});

  // p itself is always a triple system; its bracket span gives the
  // copolarity of the right-translation action.
  const TripleSystem ts = triple_system(pair, pair.p_space.basis());
  const KsectionResult ks = ksection_copolarity(ts);
  report.result("p_bracket_dim", ks.copolarity);
  report.result("minimal_section_dim", ks.section_dim);
  report.check("section_dim_identity", ks.section_dim == ks.copolarity + ks.m_dim,
               {{"section_dim", ks.section_dim},
                {"copolarity", ks.copolarity},
                {"m_dim", ks.m_dim},
                {"tolerance", 0}});

  if (pair.has_embedding() && ts.m.dim() > 0) {
    const Vector x = 0.2 * ts.m.basis().col(0);
    const TangentFormulaReport tf = tangent_formula_check(pair, ts.m, x);
    report.check("tangent_formula", tf.pass,
                 {{"distance", tf.distance}, {"tolerance", 1e-7}, {"fd_step", tf.fd_step}});

    Subspace h_triv = Subspace::zero(pair.sc.d);
    const Matrix g = mat_exp(pair.embed(Vector(0.3 * ts.m.basis().col(0))));
    const HkOrbitSpaces hk = hk_orbit_spaces(pair, h_triv, g);
    report.result("hk_tangent_dim", hk.tangent.dim());
    report.result("hk_normal_dim", hk.normal.dim());
    report.check("hk_tangent_normal_orthogonality", hk.orthogonality_residual < 1e-8,
                 {{"residual", hk.orthogonality_residual}, {"tolerance", 1e-8}});
    report.check("hk_isotropy_dims_agree", hk.isotropy_dim_lifted == hk.isotropy_dim_base,
                 {{"lifted", hk.isotropy_dim_lifted},
                  {"base", hk.isotropy_dim_base},
                  {"tolerance", 0}});
  }
  (void)config;
}

void run_gauge(const SymPairInput& input, const TolerancePolicy& policy,
               const RunConfig& config, ReportBuilder& report) {
  const SymPair pair =
      cartan_decompose(input.sc, input.inner, input.sigma_inv, policy, input.embedding);
  const Subspace& p = pair.p_space;
  report.result("p_dim", p.dim());

  // Search the p-basis for a pair satisfying the rotation relation: its
  // absence is the hyperpolar branch of the dichotomy.
  for (long i = 0; i < p.dim(); ++i) {
    for (long j = 0; j < p.dim(); ++j) {
      if (i == j) continue;
      const Vector x = p.basis().col(i);
      Vector y = p.basis().col(j);
      const double norm = std::sqrt(y.dot(pair.inner * y));
      if (norm <= 0.0) continue;
      y /= norm;
      try {
        const GramEvidence gram = gauge_gram(pair, x, y, config.terms);
        report.result("branch", "non_abelian");
        report.result("c", gram.c);
        report.result("n_terms", config.terms);
        report.result("quadrature_nodes", gram.quadrature_nodes);
        report.result("min_eigenvalue", gram.min_eigenvalue);
        report.result("two_path_discrepancy", gram.discrepancy);
        report.check("gram_positive_definite", gram.min_eigenvalue > 1e-10,
                     {{"min_eigenvalue", gram.min_eigenvalue}, {"tolerance", 1e-10}});
        report.check("quadrature_matches_closed_form", gram.discrepancy < 1e-8,
                     {{"discrepancy", gram.discrepancy}, {"tolerance", 1e-8}});
        return;
      } catch (const EigenRelationError&) {
        continue;
      }
    }
  }
  report.result("branch", "hyperpolar");
  report.check("abelian_family_rejected", true,
               {{"note", "no basis pair satisfies (ad_X)^2 Y = -c Y with c > 0; "
                         "the flat-section branch has no Gram family"},
                {"tolerance", 0}});
}

void run_resolution_rep(const LieRep& rep, const RunConfig& config, ReportBuilder& report) {
  const CanonicalAnalysis analysis = canonical_analysis(rep, config.samples, config.seed);
  const ReductionData red = reduction(rep, analysis.cand);
  const long max_dim = analysis.ctx.certificate->max_orbit_dim;

  report.result("section_dim", analysis.cand.sigma.dim());
  report.result("weyl_dim", red.weyl_dim);

  Rng rng(Rng::mix(config.seed, 0x6e5));
  bool consistent = true;
  bool shrink = true;
  int criterion_holds = 0;
  json rows = json::array();
  const int count = std::min(config.samples, 50);
  for (int i = 0; i < count; ++i) {
    const Vector s = i == 0 ? Vector(Vector::Zero(rep.ambient_dim()))
                            : Vector(analysis.cand.sigma.basis() *
                                     rng.gaussian_vector(analysis.cand.sigma.dim()));
    const DiffeoCriterion crit = local_diffeo_criterion(rep, red, s);
    const PointContext ctx = analyze_point(rep, s);
    const long resolved = resolution_isotropy(rep, red, s);
    consistent = consistent && crit.consistent();
    shrink = shrink && resolved <= ctx.isotropy_alg.dim();
    if (crit.pass()) ++criterion_holds;
    rows.push_back({{"orbit_dim", ctx.orbit_dim()},
                    {"regular", ctx.orbit_dim() == max_dim},
                    {"criterion_holds", crit.pass()},
                    {"isotropy_dim", ctx.isotropy_alg.dim()},
                    {"resolved_isotropy_dim", resolved}});
  }
  report.result("points", std::move(rows));
  report.result("criterion_holds_count", criterion_holds);
  report.check("criterion_forms_agree", consistent,
               {{"points", count}, {"tolerance", 0}});
  report.check("resolution_never_grows_isotropy", shrink,
               {{"points", count}, {"tolerance", 0}});

  const DimensionAudit audit = dimension_audit(rep, red, std::min(config.samples, 25), config.seed);
  report.check("dimension_audit", audit.pass,
               {{"rows", audit.rows.size()},
                {"chain_identity", audit.chain_identity},
                {"tolerance", 0}});
}

void run_resolution_triple(const TripleDatumInput& input, const TolerancePolicy& policy,
                           const RunConfig& config, ReportBuilder& report) {
  const long d = input.sc.d;
  Matrix h_cols = Matrix::Zero(d, static_cast<long>(input.h_indices.size()));
  for (std::size_t i = 0; i < input.h_indices.size(); ++i) {
    h_cols(input.h_indices[i], static_cast<long>(i)) = 1.0;
  }
  Matrix n_cols = Matrix::Zero(d, static_cast<long>(input.n_indices.size()));
  for (std::size_t i = 0; i < input.n_indices.size(); ++i) {
    n_cols(input.n_indices[i], static_cast<long>(i)) = 1.0;
  }
  const TripleDatum td = make_triple_datum(input.sc, orthonormal_basis(h_cols, policy),
                                           orthonormal_basis(n_cols, policy), policy);
  report.result("algebra_dim", d);
  report.result("h_dim", td.h_alg.dim());
  report.result("n_dim", td.n_alg.dim());
  report.result("quotient_dim", td.quotient_dim());

  const MetricSolution sol = gw_metric(td);
  report.result("pd_found", sol.feasible);
  report.result("min_eigenvalue", sol.min_eig);
  report.result("solution_space_dim", sol.solution_space_dim);
  if (!sol.feasible) {
    // One-sided verdict: not found within the budget, not a proof of
    // nonexistence.
    report.result("verdict", "no positive-definite solution found within budget");
    return;
  }
  report.check("skewness_constraints", sol.skew_residual < 1e-8,
               {{"residual", sol.skew_residual}, {"tolerance", 1e-8}});
  const IsometryCheck iso = metric_isometry_check(td, sol);
  report.check("quotient_isometry", iso.pass,
               {{"residual", iso.residual},
                {"compared_dim", iso.compared_dim},
                {"tolerance", 1e-9}});
  (void)config;
}

}  // namespace

int run(const RunConfig& config) {
  TolerancePolicy policy;
  if (config.rel_rank_tol) policy.rel_rank_tol = *config.rel_rank_tol;
  if (config.abs_zero_tol) policy.abs_zero_tol = *config.abs_zero_tol;
  if (config.containment_tol) policy.containment_tol = *config.containment_tol;

  std::string digest;
  std::optional<ParsedInput> input;
  try {
    policy.validate();
    if (config.samples < 1) throw InputError("samples must be >= 1");
    if (config.input_path.empty() || config.output_path.empty()) {
      throw InputError("input and output paths must be non-empty");
    }
    const std::string bytes = read_file(config.input_path);
    digest = digest_bytes(bytes);
    input = parse_input(nlohmann::json::parse(bytes), policy);
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  }

  ReportBuilder report(config, digest, policy);
  try {
    if (config.command == "analyze") {
      run_analyze(expect_linear_rep(*input, config.command), config, report);
    } else if (config.command == "copolarity") {
      run_copolarity(expect_linear_rep(*input, config.command), config, report);
    } else if (config.command == "reduce") {
      run_reduce(expect_linear_rep(*input, config.command), config, report);
    } else if (config.command == "slice") {
      run_slice(expect_linear_rep(*input, config.command), config, report);
    } else if (config.command == "verify") {
      run_verify(expect_linear_rep(*input, config.command), config, report);
    } else if (config.command == "sympair") {
      run_sympair(expect_sym_pair(*input, config.command), policy, config, report);
    } else if (config.command == "gauge") {
      run_gauge(expect_sym_pair(*input, config.command), policy, config, report);
    } else if (config.command == "resolution") {
      if (std::holds_alternative<LieRep>(*input)) {
        run_resolution_rep(std::get<LieRep>(*input), config, report);
      } else if (std::holds_alternative<TripleDatumInput>(*input)) {
        run_resolution_triple(std::get<TripleDatumInput>(*input), policy, config, report);
      } else {
        throw InputError("resolution expects a linear_rep or triple_datum input");
      }
    } else {
      throw InputError("unknown command: " + config.command);
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }

  report.root["pass"] = report.all_pass;
  write_atomically(config.output_path, report.root.dump(2) + "\n");
  return report.all_pass ? 0 : 2;
}

}  // namespace copolab
