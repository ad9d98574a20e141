#pragma once

// Tail decay of the characteristic function of mu = T_1(mu) * ... * T_m(mu).
//
// With t_i = 1/|(T_i^*)^{-1}| and r the root of sum t_i^r = 1, the function
//   g(v) = -|v|^{-r} log|phi(v)|
// is bounded below on |v| > 1 by its minimum c over the annulus
// min t_i <= |v| <= 1, so |phi(v)| <= exp(-c |v|^r) there and phi is integrable.

#include "autophage/charfn.hpp"
#include "autophage/linops.hpp"

#include <span>
#include <vector>

namespace autophage {

/// 1/|(A^*)^{-1}|, the smallest singular value of A. Throws on singular A.
double inverse_adjoint_norm(const LinearMap& a);

struct FactorPair {
  double t = 0.0;
  double s = 0.0;
};

FactorPair inverse_adjoint_norms(const LinearMap& t, const LinearMap& s);

/// Unique r > 0 with t^r + s^r = 1.
double solve_exponent(double t, double s);

/// Unique r > 0 with sum_i f_i^r = 1; needs at least two factors in (0,1).
double solve_exponent(std::span<const double> factors);

struct AnnulusSampling {
  std::size_t directions = 4096;
  std::size_t radii = 64;
};

/// g(v) = -|v|^{-r} log|phi(v)|.
double decay_function(const CharFnModel& model, std::span<const double> v, double r);

struct AnnulusSample {
  Vector v;
  double g = 0.0;
};

struct ConstantEstimate {
  double c = 0.0;
  Vector argmin;
  /// Finite sampling only upper-bounds the true infimum.
  bool sampled = true;
  std::vector<AnnulusSample> samples;
};

/// Minimum of g over a quasi-random sample of inner_radius <= |v| <= 1.
/// Throws std::domain_error when |phi| is 0 or 1 somewhere on the annulus.
ConstantEstimate estimate_constant(const CharFnModel& model, double inner_radius, double r,
                                   const AnnulusSampling& sampling = {});

ConstantEstimate estimate_constant(const CharFnModel& model, double t, double s, double r,
                                   const AnnulusSampling& sampling = {});

struct DecayProfile {
  std::vector<double> factors;  // t_i
  double r = 0.0;
  double c = 0.0;
  bool sampled = true;
  Vector argmin;
  std::vector<AnnulusSample> annulus_samples;

  double t() const { return factors.at(0); }
  double s() const { return factors.at(factors.size() > 1 ? 1 : 0); }
  double inner_radius() const;
};

/// Full pipeline: inverse adjoint norms, exponent, constant.
DecayProfile decay_profile(const CharFnModel& model, std::span<const LinearMap> maps,
                           const AnnulusSampling& sampling = {});

struct BoundRow {
  std::size_t ray = 0;
  double radius = 0.0;
  double modulus = 0.0;  // |phi(radius * ray)|
  double bound = 0.0;    // exp(-c radius^r)
  double margin = 0.0;   // bound - modulus
};

struct BoundReport {
  std::vector<BoundRow> rows;
  std::vector<BoundRow> violations;  // modulus - bound > threshold
};

inline constexpr double kBoundViolationThreshold = 1e-9;

/// Checks |phi(rho u)| <= exp(-c rho^r) on every ray u and radius rho > 1.
BoundReport verify_bound(const CharFnModel& model, double r, double c, std::span<const Vector> rays,
                         std::span<const double> radii, double threshold = kBoundViolationThreshold);

/// count radii evenly spaced in (1, max_radius].
std::vector<double> bound_radii(std::size_t count, double max_radius);

/// int_{|v|<=1} |v|^moment dv + int_{|v|>1} |v|^moment exp(-c |v|^r) dv in R^dim,
/// by radial quadrature. Throws std::invalid_argument unless r, c > 0.
double radial_bound_integral(double r, double c, std::size_t dim, unsigned moment = 0);

/// Upper bound for the L1 norm of phi given its decay profile (moment 0).
double integrability_estimate(const CharFnModel& model, double r, double c);

}  // namespace autophage
