#include "copolab/liealg.hpp"

#include "copolab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace copolab {

namespace {

Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

}  // namespace

Vector StructureConstants::bracket(const Vector& x, const Vector& y) const {
  if (x.size() != d || y.size() != d) {
    throw DimensionError("structure constants: coefficient size mismatch");
  }
  Vector out = Vector::Zero(d);
  for (long i = 0; i < d; ++i) {
    if (x(i) == 0.0) continue;
    out.noalias() += x(i) * (table[i].transpose() * y);
  }
  return out;
}

Matrix StructureConstants::ad(const Vector& x) const {
  if (x.size() != d) throw DimensionError("structure constants: coefficient size mismatch");
  Matrix m = Matrix::Zero(d, d);
  for (long i = 0; i < d; ++i) {
    if (x(i) == 0.0) continue;
    m.noalias() += x(i) * table[i].transpose();
  }
  return m;
}

double StructureConstants::antisymmetry_residual() const {
  double worst = 0.0;
  for (long i = 0; i < d; ++i) {
    for (long j = 0; j < d; ++j) {
      for (long k = 0; k < d; ++k) {
        worst = std::max(worst, std::abs(table[i](j, k) + table[j](i, k)));
      }
    }
  }
  return worst;
}

double StructureConstants::jacobi_residual() const {
  double worst = 0.0;
  for (long i = 0; i < d; ++i) {
    Vector ei = Vector::Zero(d);
    ei(i) = 1.0;
    for (long j = 0; j < d; ++j) {
      Vector ej = Vector::Zero(d);
      ej(j) = 1.0;
      for (long k = 0; k < d; ++k) {
        Vector ek = Vector::Zero(d);
        ek(k) = 1.0;
        const Vector r = bracket(ei, bracket(ej, ek)) + bracket(ej, bracket(ek, ei)) +
                         bracket(ek, bracket(ei, ej));
        worst = std::max(worst, r.lpNorm<Eigen::Infinity>());
      }
    }
  }
  return worst;
}

StructureConstants check_closure(const std::vector<Matrix>& generators,
                                 const TolerancePolicy& policy) {
  const long d = static_cast<long>(generators.size());
  StructureConstants sc;
  sc.d = d;
  sc.table.assign(d, Matrix::Zero(d, d));
  if (d == 0) return sc;

  const long n = generators[0].rows();
  Matrix stack(n * n, d);
  for (long i = 0; i < d; ++i) stack.col(i) = vec(generators[i]);

  Eigen::JacobiSVD<Matrix> svd(stack, Eigen::ComputeThinU | Eigen::ComputeThinV);
  for (long i = 0; i < d; ++i) {
    for (long j = i + 1; j < d; ++j) {
      const Vector b = vec(commutator(generators[i], generators[j]));
      const Vector coeffs = svd.solve(b);
      const double residual = (stack * coeffs - b).norm() / std::max(1.0, b.norm());
      if (residual >= policy.containment_tol) {
        throw NotClosedError(i, j, residual);
      }
      sc.table[i].row(j) = coeffs.transpose();
      sc.table[j].row(i) = -coeffs.transpose();
    }
  }
  return sc;
}

LieRep::LieRep(long ambient_dim, std::vector<Matrix> generators, TolerancePolicy policy,
               bool orthogonal, std::vector<Matrix> discrete_elements)
    : ambient_dim_(ambient_dim),
      generators_(std::move(generators)),
      discrete_elements_(std::move(discrete_elements)),
      policy_(policy),
      orthogonal_(orthogonal) {
  policy_.validate();
  if (ambient_dim_ < 0) throw InputError("ambient dimension must be non-negative");

  for (std::size_t i = 0; i < generators_.size(); ++i) {
    const Matrix& g = generators_[i];
    if (g.rows() != ambient_dim_ || g.cols() != ambient_dim_) {
      throw DimensionError("generator " + std::to_string(i) + " is " +
                           std::to_string(g.rows()) + "x" + std::to_string(g.cols()) +
                           ", expected " + std::to_string(ambient_dim_) + "x" +
                           std::to_string(ambient_dim_));
    }
    require_finite(g, "generator");
    if (orthogonal_) {
      const double skew = (g + g.transpose()).lpNorm<Eigen::Infinity>();
      if (skew >= policy_.abs_zero_tol * std::max(1.0, g.lpNorm<Eigen::Infinity>())) {
        throw InputError("generator " + std::to_string(i) +
                         " is not skew-symmetric but the representation is "
                         "declared orthogonal (residual " +
                         std::to_string(skew) + ")");
      }
    }
  }
  for (std::size_t i = 0; i < discrete_elements_.size(); ++i) {
    const Matrix& e = discrete_elements_[i];
    if (e.rows() != ambient_dim_ || e.cols() != ambient_dim_) {
      throw DimensionError("discrete element " + std::to_string(i) + " has wrong shape");
    }
    require_finite(e, "discrete element");
    const double orth = (e.transpose() * e - Matrix::Identity(ambient_dim_, ambient_dim_))
                            .lpNorm<Eigen::Infinity>();
    if (orth >= 1e-8) {
      throw InputError("discrete element " + std::to_string(i) +
                       " is not orthogonal (residual " + std::to_string(orth) + ")");
    }
  }

  if (!generators_.empty()) {
    Matrix stack(ambient_dim_ * ambient_dim_, dim());
    for (long i = 0; i < dim(); ++i) {
      stack.col(i) = Eigen::Map<const Vector>(generators_[i].data(), generators_[i].size());
    }
    if (numerical_rank(stack, policy_) != dim()) {
      throw InputError("generators are not linearly independent");
    }
  }
  structure_ = check_closure(generators_, policy_);
}

Matrix LieRep::combine(const Vector& coeffs) const {
  if (coeffs.size() != dim()) throw DimensionError("combine: coefficient size mismatch");
  Matrix out = Matrix::Zero(ambient_dim_, ambient_dim_);
  for (long i = 0; i < dim(); ++i) {
    if (coeffs(i) != 0.0) out.noalias() += coeffs(i) * generators_[i];
  }
  return out;
}

Matrix LieRep::orbit_map(const Vector& p) const {
  if (p.size() != ambient_dim_) throw DimensionError("orbit_map: point size mismatch");
  Matrix s(ambient_dim_, dim());
  for (long i = 0; i < dim(); ++i) s.col(i) = generators_[i] * p;
  return s;
}

Vector killing_value(const LieRep& rep, const Vector& coeffs, const Vector& p) {
  require_finite(p, "killing_value point");
  if (p.size() != rep.ambient_dim()) throw DimensionError("killing_value: point size mismatch");
  return rep.combine(coeffs) * p;
}

Matrix sample_element(const LieRep& rep, double radius, std::uint64_t seed) {
  if (!(radius > 0.0)) throw InputError("sample_element: radius must be positive");
  Rng rng(seed);
  Matrix g = Matrix::Identity(rep.ambient_dim(), rep.ambient_dim());
  for (long j = 0; j < rep.dim(); ++j) {
    const double t = rng.uniform(-radius, radius);
    g = g * mat_exp(t * rep.generators()[j]);
  }
  return g;
}

}  // namespace copolab
