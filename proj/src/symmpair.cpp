#include "copolab/symmpair.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace copolab {

namespace {

Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix flatten_basis(const std::vector<Matrix>& mats) {
  if (mats.empty()) return Matrix(0, 0);
  Matrix flat(mats[0].size(), static_cast<long>(mats.size()));
  for (std::size_t i = 0; i < mats.size(); ++i) flat.col(static_cast<long>(i)) = vec(mats[i]);
  return flat;
}

/// Inner-orthogonal complement of a coefficient subspace: {x : B^T G x = 0}.
Subspace inner_complement(const Subspace& sub, const Matrix& inner,
                          const TolerancePolicy& policy) {
  if (sub.dim() == 0) return Subspace::full(inner.rows());
  return nullspace(Matrix(sub.basis().transpose() * inner), policy);
}

/// Nodes and weights of n-point Gauss-Legendre quadrature on [0, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    // map from [-1, 1] to [0, 1]
    nodes[i] = 0.5 * (1.0 - x);
    nodes[n - 1 - i] = 0.5 * (1.0 + x);
    weights[i] = 0.5 * w;
    weights[n - 1 - i] = 0.5 * w;
  }
}

int nth_odd_prime(int n) {
  int count = 0;
  for (int candidate = 3;; candidate += 2) {
    bool prime = true;
    for (int f = 3; f * f <= candidate; f += 2) {
      if (candidate % f == 0) {
        prime = false;
        break;
      }
    }
    if (prime && ++count == n) return candidate;
  }
}

}  // namespace

Matrix SymPair::embed(const Vector& coeffs) const {
  if (!has_embedding()) throw InputError("no matrix embedding supplied");
  if (coeffs.size() != sc.d) throw DimensionError("embed: coefficient size mismatch");
  Matrix out = Matrix::Zero(embedding[0].rows(), embedding[0].cols());
  for (long i = 0; i < sc.d; ++i) {
    if (coeffs(i) != 0.0) out.noalias() += coeffs(i) * embedding[i];
  }
  return out;
}

Vector SymPair::coefficients(const Matrix& m) const {
  if (!has_embedding()) throw InputError("no matrix embedding supplied");
  const Matrix flat = flatten_basis(embedding);
  Eigen::JacobiSVD<Matrix> svd(flat, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector target = vec(m);
  const Vector coeffs = svd.solve(target);
  const double residual = (flat * coeffs - target).norm() / std::max(1.0, target.norm());
  if (residual >= 1e-6) {
    throw PreconditionError("matrix does not lie in the embedded algebra", residual);
  }
  return coeffs;
}

SymPair cartan_decompose(const StructureConstants& sc, const Matrix& inner,
                         const Matrix& sigma_inv, const TolerancePolicy& policy,
                         std::vector<Matrix> embedding) {
  policy.validate();
  const long d = sc.d;
  if (inner.rows() != d || inner.cols() != d) throw DimensionError("inner product size mismatch");
  if (sigma_inv.rows() != d || sigma_inv.cols() != d) throw DimensionError("involution size mismatch");
  require_finite(inner, "inner product");
  require_finite(sigma_inv, "involution");

  const Matrix eye = Matrix::Identity(d, d);
  const double inv_res = (sigma_inv * sigma_inv - eye).lpNorm<Eigen::Infinity>();
  if (inv_res >= 1e-10) throw NotInvolutionError(inv_res);

  double autom_res = 0.0;
  for (long i = 0; i < d; ++i) {
    for (long j = i + 1; j < d; ++j) {
      const Vector lhs = sigma_inv * sc.bracket(eye.col(i), eye.col(j));
      const Vector rhs = sc.bracket(Vector(sigma_inv.col(i)), Vector(sigma_inv.col(j)));
      autom_res = std::max(autom_res, (lhs - rhs).lpNorm<Eigen::Infinity>());
    }
  }
  if (autom_res >= 1e-9) throw NotAutomorphismError(autom_res);

  const double sym_res = (inner - inner.transpose()).lpNorm<Eigen::Infinity>();
  if (sym_res >= 1e-10) throw InputError("inner product is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(inner);
  if (d > 0 && es.eigenvalues()(0) <= 0.0) {
    throw InputError("inner product is not positive definite");
  }
  double ad_res = 0.0;
  for (long z = 0; z < d; ++z) {
    const Matrix ad_z = sc.ad(Vector(eye.col(z)));
    ad_res = std::max(ad_res,
                      (Matrix(ad_z.transpose() * inner + inner * ad_z)).lpNorm<Eigen::Infinity>());
  }
  if (ad_res >= 1e-9) {
    throw InputError("inner product is not Ad-invariant (residual " + std::to_string(ad_res) + ")");
  }

  SymPair pair;
  pair.sc = sc;
  pair.inner = inner;
  pair.sigma_inv = sigma_inv;
  pair.policy = policy;
  pair.k_space = nullspace(Matrix(sigma_inv - eye), policy);
  pair.p_space = nullspace(Matrix(sigma_inv + eye), policy);
  if (pair.k_space.dim() + pair.p_space.dim() != d) {
    throw BadGradingError("eigenspaces of the involution do not span the algebra");
  }

  const auto grading_residual = [&](const Subspace& x, const Subspace& y, const Subspace& target) {
    double worst = 0.0;
    for (long a = 0; a < x.dim(); ++a) {
      for (long b = 0; b < y.dim(); ++b) {
        const Vector br = sc.bracket(Vector(x.basis().col(a)), Vector(y.basis().col(b)));
        worst = std::max(worst, target.containment_residual(br));
      }
    }
    return worst;
  };
  const double kk = grading_residual(pair.k_space, pair.k_space, pair.k_space);
  const double kp = grading_residual(pair.k_space, pair.p_space, pair.p_space);
  const double pp = grading_residual(pair.p_space, pair.p_space, pair.k_space);
  const double worst = std::max({kk, kp, pp});
  if (worst >= policy.containment_tol) {
    throw BadGradingError("Cartan grading violated (residual " + std::to_string(worst) + ")");
  }

  if (!embedding.empty()) {
    if (static_cast<long>(embedding.size()) != d) {
      throw InputError("embedding must supply one matrix per basis element");
    }
    const long ne = embedding[0].rows();
    for (const Matrix& m : embedding) {
      if (m.rows() != ne || m.cols() != ne) throw DimensionError("embedding matrices must be square of equal size");
      require_finite(m, "embedding matrix");
    }
    // The embedding must be a homomorphism of the bracket.
    double hom_res = 0.0;
    for (long i = 0; i < d; ++i) {
      for (long j = i + 1; j < d; ++j) {
        const Vector cij = sc.bracket(Vector(eye.col(i)), Vector(eye.col(j)));
        Matrix expected = Matrix::Zero(ne, ne);
        for (long k = 0; k < d; ++k) expected += cij(k) * embedding[k];
        hom_res = std::max(hom_res, (commutator(embedding[i], embedding[j]) - expected)
                                        .lpNorm<Eigen::Infinity>());
      }
    }
    if (hom_res >= 1e-8) {
      throw InputError("embedding is not a bracket homomorphism (residual " +
                       std::to_string(hom_res) + ")");
    }
    pair.embedding = std::move(embedding);
  }
  return pair;
}

TripleSystem triple_system(const SymPair& pair, const Matrix& m_basis) {
  const TolerancePolicy& policy = pair.policy;
  const Subspace m = orthonormal_basis(m_basis, policy);
  const double in_p = pair.p_space.containment_residual(m);
  if (in_p >= policy.containment_tol) {
    throw PreconditionError("triple_system: m is not contained in p", in_p);
  }

  const long md = m.dim();
  Matrix brackets(pair.sc.d, std::max<long>(1, md * (md - 1) / 2));
  long col = 0;
  for (long a = 0; a < md; ++a) {
    for (long b = a + 1; b < md; ++b) {
      brackets.col(col++) = pair.sc.bracket(Vector(m.basis().col(a)), Vector(m.basis().col(b)));
    }
  }
  const Subspace bracket_span =
      col == 0 ? Subspace::zero(pair.sc.d) : orthonormal_basis(brackets.leftCols(col), policy);

  double triple_res = 0.0;
  for (long a = 0; a < bracket_span.dim(); ++a) {
    for (long b = 0; b < md; ++b) {
      const Vector br =
          pair.sc.bracket(Vector(bracket_span.basis().col(a)), Vector(m.basis().col(b)));
      triple_res = std::max(triple_res, m.containment_residual(br));
    }
  }
  if (triple_res >= policy.containment_tol) throw NotTripleError(triple_res);

  const Subspace s_alg = subspace_sum(bracket_span, m, policy);
  double closure_res = 0.0;
  for (long a = 0; a < s_alg.dim(); ++a) {
    for (long b = a + 1; b < s_alg.dim(); ++b) {
      const Vector br = pair.sc.bracket(Vector(s_alg.basis().col(a)), Vector(s_alg.basis().col(b)));
      closure_res = std::max(closure_res, s_alg.containment_residual(br));
    }
  }
  if (closure_res >= policy.containment_tol) throw NotTripleError(closure_res);

  return TripleSystem{m, bracket_span, s_alg};
}

KsectionResult ksection_copolarity(const TripleSystem& ts) {
  KsectionResult out;
  out.copolarity = static_cast<int>(ts.bracket_span.dim());
  out.m_dim = ts.m.dim();
  out.section_dim = ts.s_alg.dim();
  return out;
}

HkOrbitSpaces hk_orbit_spaces(const SymPair& pair, const Subspace& h_alg, const Matrix& g_elt) {
  if (!pair.has_embedding()) {
    throw InputError("hk_orbit_spaces requires a matrix embedding");
  }
  const TolerancePolicy& policy = pair.policy;
  const long ne = pair.embedding[0].rows();
  if (g_elt.rows() != ne || g_elt.cols() != ne) {
    throw DimensionError("group element size does not match the embedding");
  }
  const double orth = (g_elt.transpose() * g_elt - Matrix::Identity(ne, ne)).lpNorm<Eigen::Infinity>();
  if (orth >= 1e-8) {
    throw PreconditionError("group element is not orthogonal", orth);
  }
  const Matrix g_inv = g_elt.transpose();
  // Conjugation must preserve the embedded algebra.
  const Matrix flat = flatten_basis(pair.embedding);
  Eigen::JacobiSVD<Matrix> svd(flat, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto ad_g_inv_coeffs = [&](const Vector& coeffs) {
    const Matrix conj = g_inv * pair.embed(coeffs) * g_elt;
    const Vector target = vec(conj);
    const Vector out = svd.solve(target);
    const double res = (flat * out - target).norm() / std::max(1.0, target.norm());
    if (res >= 1e-6) {
      throw PreconditionError("conjugation leaves the embedded algebra; element not in group", res);
    }
    return out;
  };

  HkOrbitSpaces out;

  // Tangent space: h g + g k, flattened.
  const long hd = h_alg.dim();
  const long kd = pair.k_space.dim();
  Matrix tangent_cols(ne * ne, hd + kd);
  for (long a = 0; a < hd; ++a) {
    tangent_cols.col(a) = vec(Matrix(pair.embed(Vector(h_alg.basis().col(a))) * g_elt));
  }
  for (long b = 0; b < kd; ++b) {
    tangent_cols.col(hd + b) = vec(Matrix(g_elt * pair.embed(Vector(pair.k_space.basis().col(b)))));
  }
  out.tangent = orthonormal_basis(tangent_cols, policy);

  // Normal space: g * (Ad_{g^-1}(h-perp) ^ k-perp).
  const Subspace h_perp = inner_complement(h_alg, pair.inner, policy);
  Matrix moved(pair.sc.d, h_perp.dim());
  for (long a = 0; a < h_perp.dim(); ++a) {
    moved.col(a) = ad_g_inv_coeffs(Vector(h_perp.basis().col(a)));
  }
  const Subspace moved_span = orthonormal_basis(moved, policy);
  const Subspace k_perp = inner_complement(pair.k_space, pair.inner, policy);
  const Subspace normal_coeff = subspace_intersect(moved_span, k_perp, policy);
  Matrix normal_cols(ne * ne, normal_coeff.dim());
  for (long a = 0; a < normal_coeff.dim(); ++a) {
    normal_cols.col(a) = vec(Matrix(g_elt * pair.embed(Vector(normal_coeff.basis().col(a)))));
  }
  out.normal = orthonormal_basis(normal_cols, policy);

  if (out.tangent.dim() > 0 && out.normal.dim() > 0) {
    out.orthogonality_residual =
        (out.tangent.basis().transpose() * out.normal.basis()).lpNorm<Eigen::Infinity>();
  }

  // Lifted isotropy: pairs (X, Y) in h x k with X g - g Y = 0.
  Matrix system(ne * ne, hd + kd);
  for (long a = 0; a < hd; ++a) {
    system.col(a) = vec(Matrix(pair.embed(Vector(h_alg.basis().col(a))) * g_elt));
  }
  for (long b = 0; b < kd; ++b) {
    system.col(hd + b) = vec(Matrix(-g_elt * pair.embed(Vector(pair.k_space.basis().col(b)))));
  }
  out.isotropy_dim_lifted = (hd + kd) == 0 ? 0 : nullspace(system, policy).dim();

  // Base isotropy: h ^ Ad_g k.
  Matrix adg_k(pair.sc.d, kd);
  for (long b = 0; b < kd; ++b) {
    const Matrix conj = g_elt * pair.embed(Vector(pair.k_space.basis().col(b))) * g_inv;
    adg_k.col(b) = svd.solve(vec(conj));
  }
  const Subspace adg_k_span = orthonormal_basis(adg_k, policy);
  out.isotropy_dim_base = subspace_intersect(h_alg, adg_k_span, policy).dim();
  return out;
}

TangentFormulaReport tangent_formula_check(const SymPair& pair, const Subspace& m_sub,
                                           const Vector& x_coeffs, double fd_step) {
  if (!pair.has_embedding()) {
    throw InputError("tangent_formula_check requires a matrix embedding");
  }
  const TolerancePolicy& policy = pair.policy;
  const long ne = pair.embedding[0].rows();
  const Matrix exp_x = mat_exp(pair.embed(x_coeffs));

  // Right side: exp(X) * m * exp(X).
  Matrix rhs_cols(ne * ne, m_sub.dim());
  for (long a = 0; a < m_sub.dim(); ++a) {
    rhs_cols.col(a) = vec(Matrix(exp_x * pair.embed(Vector(m_sub.basis().col(a))) * exp_x));
  }
  const Subspace rhs = orthonormal_basis(rhs_cols, policy);

  // Left side: tangent space of the exponential image at exp(2X), by
  // central differences through curves s -> exp(2(X + s B)).
  Matrix lhs_cols(ne * ne, m_sub.dim());
  for (long a = 0; a < m_sub.dim(); ++a) {
    const Vector dir = m_sub.basis().col(a);
    const Matrix plus = mat_exp(pair.embed(Vector(2.0 * (x_coeffs + fd_step * dir))));
    const Matrix minus = mat_exp(pair.embed(Vector(2.0 * (x_coeffs - fd_step * dir))));
    lhs_cols.col(a) = vec(Matrix((plus - minus) / (2.0 * fd_step)));
  }
  const Subspace lhs = orthonormal_basis(lhs_cols, policy);

  TangentFormulaReport report;
  report.fd_step = fd_step;
  report.distance = subspace_distance(lhs, rhs);
  report.pass = lhs.dim() == rhs.dim() && report.distance < 1e-7;
  return report;
}

GramEvidence gauge_gram(const SymPair& pair, const Vector& x_coeffs, const Vector& y_coeffs,
                        int n_terms, int quadrature_nodes) {
  if (n_terms < 1) throw InputError("gauge_gram: n_terms must be >= 1");
  if (quadrature_nodes < 2) throw InputError("gauge_gram: need at least 2 quadrature nodes");

  const Matrix ad_x = pair.sc.ad(x_coeffs);
  const auto ip = [&](const Vector& u, const Vector& v) { return u.dot(pair.inner * v); };

  const double y_norm = std::sqrt(ip(y_coeffs, y_coeffs));
  if (std::abs(y_norm - 1.0) >= 1e-8) {
    throw EigenRelationError("Y must have unit norm under the pair inner product (|Y| = " +
                             std::to_string(y_norm) + ")");
  }
  const Vector ad2y = ad_x * (ad_x * y_coeffs);
  const double c = -ip(ad2y, y_coeffs);
  const double relation_residual = (ad2y + c * y_coeffs).norm();
  if (!(c > 1e-12) || relation_residual >= 1e-8 * std::max(1.0, c)) {
    throw EigenRelationError(
        "(ad_X)^2 Y = -c Y with c > 0 fails (c = " + std::to_string(c) + ", residual " +
        std::to_string(relation_residual) + "); an abelian m has no such pair");
  }
  const double delta = std::sqrt(c);

  std::vector<int> primes(n_terms);
  for (int i = 0; i < n_terms; ++i) primes[i] = nth_odd_prime(i + 1);

  std::vector<double> nodes, weights;
  gauss_legendre(quadrature_nodes, nodes, weights);

  GramEvidence out;
  out.c = c;
  out.quadrature_nodes = quadrature_nodes;
  out.quadrature = Matrix::Zero(n_terms, n_terms);
  out.closed_form = Matrix::Zero(n_terms, n_terms);

  std::vector<std::vector<Vector>> flows(n_terms, std::vector<Vector>(nodes.size()));
  for (int i = 0; i < n_terms; ++i) {
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const double arg = (1.0 - nodes[k]) / primes[i];
      flows[i][k] = mat_exp(Matrix(arg * ad_x)) * y_coeffs;
    }
  }
  for (int i = 0; i < n_terms; ++i) {
    for (int j = i; j < n_terms; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < nodes.size(); ++k) {
        acc += weights[k] * ip(flows[i][k], flows[j][k]);
      }
      out.quadrature(i, j) = acc;
      out.quadrature(j, i) = acc;

      const double gap = delta * (1.0 / primes[i] - 1.0 / primes[j]);
      const double closed = i == j ? 1.0 : std::sin(gap) / gap;
      out.closed_form(i, j) = closed;
      out.closed_form(j, i) = closed;
    }
  }
  out.discrepancy = (out.quadrature - out.closed_form).lpNorm<Eigen::Infinity>();
  Eigen::SelfAdjointEigenSolver<Matrix> es(out.quadrature);
  out.min_eigenvalue = es.eigenvalues()(0);
  return out;
}

}  // namespace copolab
