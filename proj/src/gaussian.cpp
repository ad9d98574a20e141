#include "autophage/gaussian.hpp"

#include <cmath>
#include <stdexcept>

namespace autophage {

LinearMap gaussian_cofactor(const LinearMap& form, const LinearMap& t) {
  if (form.dim() != t.dim()) throw std::invalid_argument("gaussian_cofactor: dimension mismatch");
  if (!t.is_symmetric(1e-12 * (1.0 + t.max_abs()))) throw std::invalid_argument("gaussian_cofactor: T must be symmetric");
  if (operator_norm(t) >= 1.0) throw std::invalid_argument("gaussian_cofactor: |T| >= 1, I - T^2 is not positive definite");
  if (smallest_singular_value(t) <= 1e-14) throw std::invalid_argument("gaussian_cofactor: T must be invertible");
  if (operator_norm(commutator(t, form)) > 1e-12 * (1.0 + operator_norm(t) * operator_norm(form)))
    throw std::invalid_argument("gaussian_cofactor: T and P do not commute");

  LinearMap s = symmetric_sqrt(LinearMap::identity(t.dim()) - t * t);
  // Remove round-off asymmetry.
  return 0.5 * (s + s.adjoint());
}

GaussianSpec make_gaussian_spec(const LinearMap& form, const LinearMap& t) {
  return GaussianSpec{form, t, gaussian_cofactor(form, t)};
}

double covariance_residual(const LinearMap& form, const LinearMap& t, const LinearMap& s) {
  if (form.dim() != t.dim() || form.dim() != s.dim())
    throw std::invalid_argument("covariance_residual: dimension mismatch");
  return operator_norm(t * form * t.adjoint() + s * form * s.adjoint() - form);
}

std::vector<LinearMap> stationary_covariance_space(const LinearMap& t, const LinearMap& s) {
  if (t.dim() != s.dim()) throw std::invalid_argument("stationary_covariance_space: dimension mismatch");
  const std::size_t d = t.dim();

  // Orthonormal basis of symmetric matrices: E_ii and (E_ij + E_ji)/sqrt2.
  std::vector<LinearMap> basis;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      LinearMap e(d);
      if (i == j) {
        e(i, i) = 1.0;
      } else {
        e(i, j) = e(j, i) = 1.0 / std::sqrt(2.0);
      }
      basis.push_back(std::move(e));
    }
  const std::size_t n = basis.size();

  auto inner = [d](const LinearMap& a, const LinearMap& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) acc += a(i, j) * b(i, j);
    return acc;
  };

  // M = matrix of (Q -> T Q T^* + S Q S^* - Q) in that basis.
  std::vector<double> m(n * n);
  const LinearMap ta = t.adjoint(), sa = s.adjoint();
  for (std::size_t c = 0; c < n; ++c) {
    const LinearMap image = t * basis[c] * ta + s * basis[c] * sa - basis[c];
    for (std::size_t r = 0; r < n; ++r) m[r * n + c] = inner(basis[r], image);
  }

  // Null space of M from the eigenvectors of M^T M.
  std::vector<double> gram(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += m[k * n + i] * m[k * n + j];
      gram[i * n + j] = acc;
    }
  const auto eig = symmetric_eigen(n, std::move(gram));
  double scale = 1.0;
  for (double v : eig.values) scale = std::max(scale, std::abs(v));

  std::vector<LinearMap> kernel;
  for (std::size_t k = 0; k < n; ++k) {
    if (std::sqrt(std::max(0.0, eig.values[k])) > 1e-9 * std::sqrt(scale)) continue;
    LinearMap q(d);
    for (std::size_t b = 0; b < n; ++b) q += eig.vectors[k][b] * basis[b];
    kernel.push_back(std::move(q));
  }
  return kernel;
}

}  // namespace autophage
