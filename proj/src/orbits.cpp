#include "copolab/orbits.hpp"

#include "copolab/parallel.hpp"
#include "copolab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace copolab {

namespace {

Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

/// exp(M) and the Frechet derivative of exp at M in direction X, via the
/// block-triangular trick: exp([[M, X], [0, M]]) = [[e^M, L], [0, e^M]].
void exp_with_derivative(const Matrix& m, const Matrix& x, Matrix& expm, Matrix& dexp) {
  const long n = m.rows();
  Matrix block = Matrix::Zero(2 * n, 2 * n);
  block.topLeftCorner(n, n) = m;
  block.bottomRightCorner(n, n) = m;
  block.topRightCorner(n, n) = x;
  const Matrix e = mat_exp(block);
  expm = e.topLeftCorner(n, n);
  dexp = e.topRightCorner(n, n);
}

struct GroupObjective {
  const LieRep& rep;
  const Matrix* a;        // nullptr = identity
  const Matrix& points;   // N x m
  const Matrix& targets;  // rows(A) x m

  Matrix apply_a(const Matrix& v) const { return a ? Matrix(*a * v) : v; }

  double value(const Vector& t) const {
    const Matrix g = mat_exp(rep.combine(t));
    return (apply_a(g * points) - targets).squaredNorm();
  }

  double value_and_gradient(const Vector& t, Vector& grad) const {
    const long d = rep.dim();
    const Matrix m = rep.combine(t);
    grad.resize(d);
    Matrix expm, dexp;
    double f = 0.0;
    Matrix r;
    for (long i = 0; i < d; ++i) {
      exp_with_derivative(m, rep.generators()[i], expm, dexp);
      if (i == 0) {
        r = apply_a(expm * points) - targets;
        f = r.squaredNorm();
      }
      grad(i) = 2.0 * (r.cwiseProduct(apply_a(dexp * points))).sum();
    }
    if (d == 0) {
      r = apply_a(points) - targets;
      f = r.squaredNorm();
    }
    return f;
  }
};

}  // namespace

DescendResult descend_group_targets(const LieRep& rep, const Matrix* a, const Matrix& points,
                                    const Matrix& targets, Vector t, int max_iter) {
  const long d = rep.dim();
  GroupObjective obj{rep, a, points, targets};
  if (d == 0) return DescendResult{obj.value(Vector::Zero(0)), Vector::Zero(0)};

  Vector grad(d);
  double f = obj.value_and_gradient(t, grad);

  Matrix h = Matrix::Identity(d, d);  // inverse Hessian estimate (BFGS)
  for (int iter = 0; iter < max_iter; ++iter) {
    if (grad.lpNorm<Eigen::Infinity>() <= 1e-13 * std::max(1.0, f)) break;

    Vector dir = -(h * grad);
    double slope = grad.dot(dir);
    if (!(slope < 0.0)) {
      h = Matrix::Identity(d, d);
      dir = -grad;
      slope = grad.dot(dir);
      if (!(slope < 0.0)) break;
    }

    double alpha = 1.0;
    double f_new = std::numeric_limits<double>::infinity();
    Vector t_new;
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      t_new = t + alpha * dir;
      f_new = obj.value(t_new);
      if (f_new <= f + 1e-4 * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;

    Vector grad_new(d);
    obj.value_and_gradient(t_new, grad_new);
    const Vector s = t_new - t;
    const Vector y = grad_new - grad;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const Vector hy = h * y;
      const double yhy = y.dot(hy);
      h += ((sy + yhy) / (sy * sy)) * (s * s.transpose());
      h -= (hy * s.transpose() + s * hy.transpose()) / sy;
    } else {
      h = Matrix::Identity(d, d);
    }

    const double f_drop = f - f_new;
    t = t_new;
    grad = grad_new;
    f = f_new;
    if (f_drop <= 1e-17 * std::max(1.0, f) && iter > 8) break;
  }
  return DescendResult{f, std::move(t)};
}

double descend_group_objective(const LieRep& rep, const Matrix* a, const Vector& p,
                               const Vector& b, Vector t, int max_iter) {
  return descend_group_targets(rep, a, Matrix(p), Matrix(b), std::move(t), max_iter).value;
}

std::vector<Matrix> coset_elements(const LieRep& rep, std::size_t cap) {
  const long n = rep.ambient_dim();
  std::vector<Matrix> elements;
  elements.push_back(Matrix::Identity(n, n));
  const auto push_unique = [&](const Matrix& candidate) {
    if (elements.size() >= cap) return;
    for (const Matrix& e : elements) {
      if ((e - candidate).lpNorm<Eigen::Infinity>() < 1e-6) return;
    }
    elements.push_back(candidate);
  };
  for (const Matrix& e : rep.discrete_elements()) push_unique(e);
  const std::size_t base = elements.size();
  for (std::size_t i = 1; i < base; ++i) {
    for (std::size_t j = 1; j < base; ++j) {
      push_unique(elements[i] * elements[j]);
    }
  }
  return elements;
}

PointContext analyze_point(const LieRep& rep, const Vector& p) {
  require_finite(p, "analyze_point input");
  if (p.size() != rep.ambient_dim()) {
    throw DimensionError("analyze_point: point size mismatch");
  }
  const long n = rep.ambient_dim();
  const long d = rep.dim();
  PointContext ctx;
  ctx.p = p;

  if (d == 0) {
    ctx.orbit_tangent = Subspace::zero(n);
    ctx.normal = Subspace::full(n);
    ctx.isotropy_alg = Subspace::zero(0);
    return ctx;
  }

  const Matrix s = rep.orbit_map(p);
  Eigen::JacobiSVD<Matrix> svd(s, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const TolerancePolicy& policy = rep.policy();
  long rank = 0;
  if (sv.size() > 0 && sv(0) > policy.abs_zero_tol) {
    const double cut = policy.rel_rank_tol * sv(0);
    for (long i = 0; i < sv.size(); ++i) {
      if (sv(i) >= cut) ++rank;
    }
  }
  const double cut = (sv.size() > 0 && sv(0) > policy.abs_zero_tol)
                         ? policy.rel_rank_tol * sv(0)
                         : policy.abs_zero_tol;
  ctx.orbit_tangent = Subspace(n, svd.matrixU().leftCols(rank), cut);
  ctx.normal = Subspace(n, svd.matrixU().rightCols(n - rank), cut);
  ctx.isotropy_alg = Subspace(d, svd.matrixV().rightCols(d - rank), cut);
  return ctx;
}

long principal_orbit_dim(const LieRep& rep, int trials, std::uint64_t seed) {
  if (trials < 1) throw InputError("principal_orbit_dim: trials must be >= 1");
  Rng rng(Rng::mix(seed, 0x0bd1));
  long best = 0;
  for (int i = 0; i < trials; ++i) {
    const Vector p = rng.gaussian_vector(rep.ambient_dim());
    best = std::max(best, analyze_point(rep, p).orbit_dim());
    if (best == std::min<long>(rep.dim(), rep.ambient_dim())) break;
  }
  return best;
}

void certify_regular(const LieRep& rep, PointContext& ctx, int trials, std::uint64_t seed) {
  const long max_dim = principal_orbit_dim(rep, trials, seed);
  ctx.regular = ctx.orbit_dim() == max_dim;
  ctx.certificate = RegularityCertificate{max_dim, trials, seed};
}

PointContext find_regular(const LieRep& rep, int trials, std::uint64_t seed) {
  if (trials < 1) throw InputError("find_regular: trials must be >= 1");
  const long n = rep.ambient_dim();
  Rng rng(Rng::mix(seed, 0x5eed));

  long max_dim = 0;
  PointContext best;
  bool have_best = false;
  for (int i = 0; i < trials; ++i) {
    PointContext ctx = analyze_point(rep, rng.gaussian_vector(n));
    if (!have_best || ctx.orbit_dim() > max_dim) {
      max_dim = ctx.orbit_dim();
      best = ctx;
      have_best = true;
    }
  }

  best.regular = true;
  best.certificate = RegularityCertificate{max_dim, trials, seed};
  return best;
}

LieRep slice_rep(const LieRep& rep, const PointContext& ctx) {
  const Matrix& q = ctx.normal.basis();
  const long m = ctx.normal.dim();
  const long iso = ctx.isotropy_alg.dim();

  std::vector<Matrix> restricted;
  if (iso > 0 && m > 0) {
    Matrix stack(m * m, iso);
    for (long r = 0; r < iso; ++r) {
      const Matrix a = rep.combine(Vector(ctx.isotropy_alg.basis().col(r)));
      const Matrix b = q.transpose() * a * q;
      stack.col(r) = vec(b);
    }
    const Subspace span = orthonormal_basis(stack, rep.policy());
    for (long c = 0; c < span.dim(); ++c) {
      restricted.push_back(Eigen::Map<const Matrix>(span.basis().col(c).data(), m, m));
    }
  }

  // Discrete elements fixing the point belong to its isotropy group and
  // preserve the normal space; carry their restrictions along.
  std::vector<Matrix> discrete;
  if (m > 0) {
    for (const Matrix& e : rep.discrete_elements()) {
      if ((e * ctx.p - ctx.p).norm() <
          rep.policy().containment_tol * std::max(1.0, ctx.p.norm())) {
        const Matrix r = q.transpose() * e * q;
        if ((r - Matrix::Identity(m, m)).lpNorm<Eigen::Infinity>() > 1e-8) {
          discrete.push_back(r);
        }
      }
    }
  }
  return LieRep(m, std::move(restricted), rep.policy(), rep.orthogonal(),
                std::move(discrete));
}

Matrix shape_operator(const LieRep& rep, const PointContext& ctx, const Vector& v) {
  if (v.size() != rep.ambient_dim()) throw DimensionError("shape_operator: direction size mismatch");
  const double tangent_part =
      ctx.orbit_tangent.dim() == 0 ? 0.0 : (ctx.orbit_tangent.basis().transpose() * v).norm();
  if (tangent_part >= rep.policy().containment_tol * std::max(1.0, v.norm())) {
    throw PreconditionError("shape_operator: direction is not normal to the orbit",
                            tangent_part);
  }

  const long m = ctx.orbit_tangent.dim();
  if (m == 0) return Matrix::Zero(0, 0);
  const long d = rep.dim();

  Matrix bform(d, d);
  for (long i = 0; i < d; ++i) {
    for (long j = i; j < d; ++j) {
      const Matrix sym = 0.5 * (rep.generators()[i] * rep.generators()[j] +
                                rep.generators()[j] * rep.generators()[i]);
      bform(i, j) = v.dot(sym * ctx.p);
      bform(j, i) = bform(i, j);
    }
  }

  const Matrix c = ctx.orbit_tangent.basis().transpose() * rep.orbit_map(ctx.p);  // m x d
  const Matrix gram = c * c.transpose();
  const Matrix gram_inv = gram.ldlt().solve(Matrix::Identity(m, m));
  Matrix a = gram_inv * c * bform * c.transpose() * gram_inv;
  return 0.5 * (a + a.transpose());
}

JacobiTriple jacobi_split(const LieRep& rep, const Subspace& sigma, const PointContext& ctx,
                          const Vector& v, const Vector& a, const Vector& b) {
  const TolerancePolicy& policy = rep.policy();

  const double p_in_sigma = sigma.containment_residual(ctx.p);
  if (p_in_sigma >= policy.containment_tol) {
    throw PreconditionError("jacobi_split: base point is not in the section", p_in_sigma);
  }
  const double v_normal = ctx.orbit_tangent.dim() == 0
                              ? 0.0
                              : (ctx.orbit_tangent.basis().transpose() * v).norm() /
                                    std::max(1.0, v.norm());
  if (v_normal >= policy.containment_tol) {
    throw PreconditionError("jacobi_split: direction is not normal to the orbit", v_normal);
  }
  const double v_in_sigma = sigma.containment_residual(v);
  if (v_in_sigma >= policy.containment_tol) {
    throw PreconditionError("jacobi_split: direction is not tangent to the section",
                            v_in_sigma);
  }
  const double a_tangent = ctx.normal.dim() == 0
                               ? 0.0
                               : (ctx.normal.basis().transpose() * a).norm() /
                                     std::max(1.0, a.norm());
  if (a_tangent >= policy.containment_tol) {
    throw PreconditionError("jacobi_split: initial value is not tangent to the orbit",
                            a_tangent);
  }

  const Matrix& t_basis = ctx.orbit_tangent.basis();
  const Matrix av = shape_operator(rep, ctx, v);
  const auto apply_shape = [&](const Vector& w) {
    return Vector(t_basis * (av * (t_basis.transpose() * w)));
  };

  const double field_admissible =
      ctx.orbit_tangent.dim() == 0
          ? 0.0
          : (t_basis.transpose() * (b + apply_shape(a))).norm() /
                std::max(1.0, b.norm() + a.norm());
  if (field_admissible >= policy.containment_tol) {
    throw PreconditionError("jacobi_split: field is not induced by an orbit variation",
                            field_admissible);
  }

  const Subspace d_space = subspace_intersect(ctx.orbit_tangent, sigma, policy);
  const Subspace e_space = subspace_intersect(ctx.orbit_tangent, complement(sigma, policy), policy);

  const Vector ad = d_space.dim() == 0 ? Vector(Vector::Zero(a.size())) : d_space.project(a);
  const Vector ae = e_space.dim() == 0 ? Vector(Vector::Zero(a.size())) : e_space.project(a);

  JacobiTriple triple;
  triple.jd = AffineField{ad, -apply_shape(ad)};
  triple.je = AffineField{ae, -apply_shape(ae)};
  triple.j0 = AffineField{Vector::Zero(a.size()), b + apply_shape(a)};

  double split_res = 0.0;
  double je_res = 0.0;
  for (int k = 1; k <= 10; ++k) {
    const double t = 0.1 * k;
    const Vector total = triple.j0.at(t) + triple.jd.at(t) + triple.je.at(t);
    const Vector expected = a + t * b;
    split_res = std::max(split_res, (total - expected).norm() /
                                        std::max(1.0, expected.norm()));
    const Vector je_t = triple.je.at(t);
    je_res = std::max(je_res, sigma.dim() == 0
                                  ? 0.0
                                  : (sigma.basis().transpose() * je_t).norm() /
                                        std::max(1.0, je_t.norm()));
  }
  triple.split_residual = split_res;
  triple.je_normality_residual = je_res;
  return triple;
}

DistanceEstimate orbit_distance(const LieRep& rep, const Vector& p, const Vector& q,
                                int budget, std::uint64_t seed) {
  if (budget < 1) throw InputError("orbit_distance: budget must be >= 1");
  require_finite(p, "orbit_distance p");
  require_finite(q, "orbit_distance q");
  const long d = rep.dim();

  DistanceEstimate est;
  est.restarts = budget;
  if (d == 0) {
    est.value = (p - q).norm();
    est.stable = true;
    return est;
  }

  const std::vector<Matrix> elements = coset_elements(rep);
  std::vector<double> results(static_cast<std::size_t>(budget));
  parallel_for(static_cast<std::size_t>(budget), [&](std::size_t r) {
    Rng rng(Rng::mix(seed, 0xd157 + r));
    Vector t0 = r < elements.size() ? Vector(Vector::Zero(d))
                                    : rng.uniform_vector(d, -M_PI, M_PI);
    // Restart r explores the coset of element r mod |elements|:
    // ||E g p - q|| = ||g p - E^T q|| for orthogonal E.
    const Matrix& e = elements[r % elements.size()];
    results[r] = descend_group_objective(rep, nullptr, p, Vector(e.transpose() * q),
                                         std::move(t0));
  });

  double best = std::numeric_limits<double>::infinity();
  double best_at_half = std::numeric_limits<double>::infinity();
  const int half = budget / 2;
  for (int r = 0; r < budget; ++r) {
    best = std::min(best, results[static_cast<std::size_t>(r)]);
    if (r == half) best_at_half = best;
    if (half == 0) best_at_half = best;
  }
  est.value = std::sqrt(std::max(0.0, best));
  est.stable = std::abs(std::sqrt(std::max(0.0, best_at_half)) - est.value) < 1e-9;
  return est;
}

}  // namespace copolab
