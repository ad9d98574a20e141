#pragma once

// Autophage Gaussian measures: given a covariance form P and a symmetric
// strict contraction T commuting with P, the cofactor S = sqrt(I - T^2)
// satisfies T P T^* + S P S^* = P, i.e. mu = T(mu) * S(mu).

#include "autophage/linops.hpp"

#include <vector>

namespace autophage {

struct GaussianSpec {
  LinearMap form;  // P
  LinearMap t;
  LinearMap s;
};

/// S = principal square root of I - T^2. Throws std::invalid_argument when T is
/// not symmetric, |T| >= 1, or T and P do not commute.
LinearMap gaussian_cofactor(const LinearMap& form, const LinearMap& t);

/// Builds the triple (P, T, S) after checking the hypotheses.
GaussianSpec make_gaussian_spec(const LinearMap& form, const LinearMap& t);

/// |T P T^* + S P S^* - P| in operator norm.
double covariance_residual(const LinearMap& form, const LinearMap& t, const LinearMap& s);

/// Orthonormal basis (trace inner product) of the symmetric Q with
/// T Q T^* + S Q S^* = Q. Empty when only Q = 0 solves it.
std::vector<LinearMap> stationary_covariance_space(const LinearMap& t, const LinearMap& s);

}  // namespace autophage
