#include "autophage/decay.hpp"

#include "autophage/qmc.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace autophage {

double inverse_adjoint_norm(const LinearMap& a) {
  const LinearMap inv = inverse(a.adjoint());
  return 1.0 / operator_norm(inv);
}

FactorPair inverse_adjoint_norms(const LinearMap& t, const LinearMap& s) {
  return {inverse_adjoint_norm(t), inverse_adjoint_norm(s)};
}

double solve_exponent(std::span<const double> factors) {
  if (factors.size() < 2) throw std::invalid_argument("solve_exponent: needs at least two factors");
  for (double f : factors)
    if (!(f > 0.0 && f < 1.0)) throw std::invalid_argument("solve_exponent: factors must lie in (0,1)");

  // sum f^r decreases strictly from m (r=0) to 0.
  auto excess = [&](double r) {
    double acc = 0.0;
    for (double f : factors) acc += std::pow(f, r);
    return acc - 1.0;
  };
  double lo = 1e-6, hi = 64.0;
  while (excess(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 1048576.0) throw std::domain_error("solve_exponent: factors too close to 1");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  return std::abs(excess(lo)) <= std::abs(excess(hi)) ? lo : hi;
}

double solve_exponent(double t, double s) {
  const double f[] = {t, s};
  return solve_exponent(f);
}

double decay_function(const CharFnModel& model, std::span<const double> v, double r) {
  double n2 = 0.0;
  for (double x : v) n2 += x * x;
  if (n2 == 0.0) throw std::invalid_argument("decay_function: g is undefined at 0");
  const double modulus = std::abs(model(v));
  if (modulus == 0.0) throw std::domain_error("decay_function: characteristic function vanishes");
  return -std::pow(std::sqrt(n2), -r) * std::log(modulus);
}

ConstantEstimate estimate_constant(const CharFnModel& model, double inner_radius, double r,
                                   const AnnulusSampling& sampling) {
  if (!(inner_radius > 0.0 && inner_radius <= 1.0)) throw std::invalid_argument("estimate_constant: inner radius must lie in (0,1]");
  if (!(r > 0.0)) throw std::invalid_argument("estimate_constant: r must be positive");
  if (sampling.radii == 0 || sampling.directions == 0) throw std::invalid_argument("estimate_constant: empty sampling");

  const auto dirs = qmc::sphere_directions(sampling.directions, model.dim());
  ConstantEstimate est;
  est.c = std::numeric_limits<double>::infinity();
  est.samples.reserve(dirs.size() * sampling.radii);
  Vector v(model.dim());
  for (std::size_t k = 0; k < sampling.radii; ++k) {
    const double rho = sampling.radii == 1
                           ? 1.0
                           : inner_radius + (1.0 - inner_radius) * static_cast<double>(k) /
                                                static_cast<double>(sampling.radii - 1);
    for (const auto& u : dirs) {
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = rho * u[i];
      const double modulus = std::abs(model(v));
      if (modulus == 0.0) throw std::domain_error("estimate_constant: characteristic function vanishes on the annulus");
      if (modulus >= 1.0) throw std::domain_error("estimate_constant: |phi| = 1 on the annulus (measure is not full)");
      const double g = -std::pow(rho, -r) * std::log(modulus);
      est.samples.push_back({v, g});
      if (g < est.c) {
        est.c = g;
        est.argmin = v;
      }
    }
  }
  return est;
}

ConstantEstimate estimate_constant(const CharFnModel& model, double t, double s, double r,
                                   const AnnulusSampling& sampling) {
  return estimate_constant(model, std::min(t, s), r, sampling);
}

double DecayProfile::inner_radius() const { return *std::min_element(factors.begin(), factors.end()); }

DecayProfile decay_profile(const CharFnModel& model, std::span<const LinearMap> maps, const AnnulusSampling& sampling) {
  DecayProfile profile;
  for (const auto& m : maps) {
    if (m.dim() != model.dim()) throw std::invalid_argument("decay_profile: dimension mismatch");
    profile.factors.push_back(inverse_adjoint_norm(m));
  }
  profile.r = solve_exponent(profile.factors);
  auto est = estimate_constant(model, profile.inner_radius(), profile.r, sampling);
  profile.c = est.c;
  profile.sampled = est.sampled;
  profile.argmin = std::move(est.argmin);
  profile.annulus_samples = std::move(est.samples);
  return profile;
}

BoundReport verify_bound(const CharFnModel& model, double r, double c, std::span<const Vector> rays,
                         std::span<const double> radii, double threshold) {
  for (double rho : radii)
    if (!(rho > 1.0)) throw std::invalid_argument("verify_bound: radii must exceed 1");
  BoundReport report;
  Vector v(model.dim());
  for (std::size_t k = 0; k < rays.size(); ++k) {
    const auto& u = rays[k];
    if (u.size() != model.dim()) throw std::invalid_argument("verify_bound: ray dimension mismatch");
    for (double rho : radii) {
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = rho * u[i];
      BoundRow row;
      row.ray = k;
      row.radius = rho;
      row.modulus = std::abs(model(v));
      row.bound = std::exp(-c * std::pow(rho, r));
      row.margin = row.bound - row.modulus;
      report.rows.push_back(row);
      if (row.modulus - row.bound > threshold) report.violations.push_back(row);
    }
  }
  return report;
}

std::vector<double> bound_radii(std::size_t count, double max_radius) {
  if (!(max_radius > 1.0)) throw std::invalid_argument("bound_radii: max radius must exceed 1");
  std::vector<double> radii(count);
  for (std::size_t i = 0; i < count; ++i)
    radii[i] = 1.0 + (max_radius - 1.0) * static_cast<double>(i + 1) / static_cast<double>(count);
  return radii;
}

double radial_bound_integral(double r, double c, std::size_t dim, unsigned moment) {
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("radial_bound_integral: r must be positive");
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("radial_bound_integral: c must be positive (bound diverges)");
  if (dim == 0) throw std::invalid_argument("radial_bound_integral: dim must be >= 1");

  const double d = static_cast<double>(dim);
  const double surface = 2.0 * std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0);
  const double power = d + static_cast<double>(moment);
  const double inner = surface / power;

  // With u = c rho^r the tail is (1/(r c^a)) int_c^inf u^{a-1} e^{-u} du, a = power / r.
  const double a = power / r;
  const double upper = std::max(c, a) + 60.0 + 10.0 * std::sqrt(a);
  const double width = 0.5;
  const auto panels = static_cast<std::size_t>(std::ceil((upper - c) / width));
  const double h = (upper - c) / static_cast<double>(panels);
  // Factor e^{-c} out so large c does not underflow before scaling.
  auto integrand = [&](double u) { return std::exp((a - 1.0) * std::log(u) - (u - c)); };
  double tail = 0.0;
  for (std::size_t i = 0; i < panels; ++i) {
    const double lo = c + h * static_cast<double>(i);
    tail += boost::math::quadrature::gauss<double, 20>::integrate(integrand, lo, lo + h);
  }
  tail *= std::exp(-c) / (r * std::pow(c, a));
  return inner + surface * tail;
}

double integrability_estimate(const CharFnModel& model, double r, double c) {
  return radial_bound_integral(r, c, model.dim(), 0);
}

}  // namespace autophage
