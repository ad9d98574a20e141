// Acceptance suite: one PASS/FAIL line per criterion, with the measured
// quantities and the wall time against its budget. Exit status is the number
// of failed criteria.

#include "autophage/charfn.hpp"
#include "autophage/decay.hpp"
#include "autophage/density.hpp"
#include "autophage/gaussian.hpp"
#include "autophage/padic.hpp"
#include "autophage/qmc.hpp"
#include "autophage/sampler.hpp"
#include "autophage/stats.hpp"
#include "support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace autophage;
using autophage::testing::Gen;
using autophage::testing::with_spectrum;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string sci(double x) { return fmt("%.3g", x); }

// ---------------------------------------------------------------------------

Outcome gaussian_construction() {
  Gen gen(20240101);
  double worst_cov = 0.0, worst_cf = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 1 + static_cast<std::size_t>(trial % 6);
    const LinearMap q = gen.orthogonal(d);
    Vector pe(d), te(d);
    for (std::size_t i = 0; i < d; ++i) {
      pe[i] = gen.uniform(0.1, 2.0);
      const double mag = gen.uniform(0.05, 0.9);
      te[i] = gen.uniform(0.0, 1.0) < 0.5 ? -mag : mag;
    }
    const LinearMap p = with_spectrum(q, pe);
    const LinearMap t = with_spectrum(q, te);
    const LinearMap s = gaussian_cofactor(p, t);
    worst_cov = std::max(worst_cov, covariance_residual(p, t, s));

    const CharFnModel model = CharFnModel::gaussian(p);
    const EvaluationSet set = d == 1 ? EvaluationSet(GridSpec{1, 4.0, 512}) : EvaluationSet(qmc::box_points(512, d, 4.0));
    worst_cf = std::max(worst_cf, autophage_residual(model, t, s, set).max_residual);
  }
  return {worst_cov <= 1e-10 && worst_cf <= 1e-9,
          "100 pairs, d<=6: max covariance residual " + sci(worst_cov) + " (<=1e-10), max CF residual " +
              sci(worst_cf) + " (<=1e-9)"};
}

Outcome decay_exponent() {
  const double r1 = solve_exponent(0.5, 0.5);
  const double r2 = solve_exponent(std::sqrt(0.5), std::sqrt(0.5));
  bool ok = std::abs(r1 - 1.0) <= 1e-12 && std::abs(r2 - 2.0) <= 1e-12;
  double worst = 0.0;
  for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
    const LinearMap t = LinearMap::scalar(1, std::pow(0.3, 1.0 / alpha));
    const LinearMap s = LinearMap::scalar(1, std::pow(0.7, 1.0 / alpha));
    const FactorPair f = inverse_adjoint_norms(t, s);
    worst = std::max(worst, std::abs(solve_exponent(f.t, f.s) - alpha));
  }
  ok = ok && worst <= 1e-10;
  return {ok, "r(1/2,1/2)-1 = " + sci(r1 - 1.0) + ", r(2^-1/2,2^-1/2)-2 = " + sci(r2 - 2.0) +
                  ", max |r - alpha| over stable laws " + sci(worst)};
}

Outcome decay_bound() {
  struct Case {
    const char* name;
    CharFnModel model;
    double t, r;
  };
  const std::vector<Case> cases = {
      {"cauchy", CharFnModel::cauchy(2), 0.5, 1.0},
      {"gaussian", CharFnModel::gaussian(LinearMap::identity(2)), std::sqrt(0.5), 2.0},
  };
  bool ok = true;
  std::string detail;
  const auto rays = qmc::sphere_directions(64, 2);
  const auto radii = bound_radii(64, 20.0);
  for (const auto& c : cases) {
    const ConstantEstimate est = estimate_constant(c.model, c.t, c.t, c.r);
    const BoundReport rep = verify_bound(c.model, c.r, est.c, rays, radii);
    ok = ok && std::abs(est.c - 1.0) <= 1e-9 && rep.violations.empty() && rep.rows.size() == 64 * 64;
    detail += std::string(detail.empty() ? "" : "; ") + c.name + ": c-1 = " + sci(est.c - 1.0) + ", " +
              std::to_string(rep.violations.size()) + " violations / " + std::to_string(rep.rows.size());
  }
  return {ok, detail};
}

Outcome density_inversion() {
  const double pi = std::numbers::pi;
  struct Errors {
    double at_zero = 0.0, mass = 0.0;
  };
  auto run = [&](const CharFnModel& model, std::size_t n, double exact_zero,
                 const std::function<double(double)>& cdf) {
    const GridDensity gd = invert_to_density(model, GridSpec{1, 40.0, n});
    const double lo = gd.coordinate(0) - 0.5 * gd.spacing;
    const double hi = gd.coordinate(gd.points - 1) + 0.5 * gd.spacing;
    return Errors{std::abs(gd.value_at_origin() - exact_zero), std::abs(gd.total_mass - (cdf(hi) - cdf(lo)))};
  };
  const auto cauchy_cdf = [pi](double x) { return 0.5 + std::atan(x) / pi; };
  const auto normal_cdf = [](double x) { return stats::normal_cdf(x, 0.0, std::sqrt(2.0)); };

  const CharFnModel cauchy = CharFnModel::cauchy(1);
  const CharFnModel gauss = CharFnModel::gaussian(LinearMap::identity(1));
  const Errors c1 = run(cauchy, 2048, 1.0 / pi, cauchy_cdf), c2 = run(cauchy, 4096, 1.0 / pi, cauchy_cdf);
  const Errors g1 = run(gauss, 2048, 1.0 / std::sqrt(4.0 * pi), normal_cdf);
  const Errors g2 = run(gauss, 4096, 1.0 / std::sqrt(4.0 * pi), normal_cdf);

  const double slack = 1e-12;
  const bool ok = c1.at_zero <= 1e-4 && g1.at_zero <= 1e-6 && c1.mass <= 1e-3 && g1.mass <= 1e-3 &&
                  c2.at_zero <= c1.at_zero + slack && g2.at_zero <= g1.at_zero + slack &&
                  c2.mass <= c1.mass + slack && g2.mass <= g1.mass + slack;
  return {ok, "cauchy |f(0)-1/pi| " + sci(c1.at_zero) + " -> " + sci(c2.at_zero) + ", mass err " + sci(c1.mass) +
                  " -> " + sci(c2.mass) + "; gaussian |f(0)-1/sqrt(4pi)| " + sci(g1.at_zero) + " -> " +
                  sci(g2.at_zero) + ", mass err " + sci(g1.mass) + " -> " + sci(g2.mass) + " (N 2048 -> 4096)"};
}

Outcome triangular_system() {
  const LinearMap half = LinearMap::scalar(1, 0.5);
  const auto profile =
      infinitesimality_profile(half, half, SeedDistribution::gaussian(LinearMap::identity(1)), 0.1, 20, 10000, 7);
  bool monotone = true;
  for (std::size_t n = 3; n < profile.size(); ++n) monotone = monotone && profile[n] <= profile[n - 1];
  const double p20 = profile.back();

  const LinearMap root = LinearMap::scalar(1, std::sqrt(0.5));
  const SampleBatch batch = tree_sample(root, root, SeedDistribution::uniform_box({std::sqrt(3.0)}), 12, 10000, 11);
  std::vector<double> xs;
  for (const auto& x : batch.points) xs.push_back(x[0]);
  const double ks = stats::ks_statistic(xs, [](double x) { return stats::normal_cdf(x); });

  return {monotone && p20 <= 0.01 && ks <= 0.02,
          std::string("p_n nonincreasing for n>=2: ") + (monotone ? "yes" : "no") + ", p_20 = " + sci(p20) +
              " (<=0.01); CLT KS distance " + sci(ks) + " (<=0.02)"};
}

Outcome padic_instance() {
  bool ok = true;
  std::string detail;
  const padic::Scaling by_p{1, 1};
  for (unsigned p : {2u, 3u, 5u}) {
    const double r = padic::autophage_exponent(p);
    const double r10 =
        padic::autophage_residual_padic(padic::RadialMeasure::stable(padic::Quotient(p, 4, 10), r, 1.0), by_p, by_p);
    const double r12 =
        padic::autophage_residual_padic(padic::RadialMeasure::stable(padic::Quotient(p, 4, 12), r, 1.0), by_p, by_p);
    ok = ok && r10 <= 1e-6 && r12 <= 0.5 * r10;
    detail += std::string(detail.empty() ? "" : "; ") + "p=" + std::to_string(p) + ": k=10 " + sci(r10) +
              ", k=12 " + sci(r12);
  }
  return {ok, detail + " (need k=10 <= 1e-6 and k=12 <= half of k=10)"};
}

Outcome idempotent_exclusion() {
  bool ok = true;
  std::string detail;
  const padic::Scaling by_p{1, 1};
  for (unsigned p : {2u, 3u, 5u}) {
    const padic::Quotient q(p, 4, 10);
    const double res = padic::autophage_residual_padic(padic::RadialMeasure::haar_ball(q, 0), by_p, by_p);
    const double expected = 1.0 - 1.0 / p;
    const padic::SubgroupReport haar_p = padic::unit_modulus_subgroup(padic::RadialMeasure::haar_ball(q, 1));
    const padic::SubgroupReport stable =
        padic::unit_modulus_subgroup(padic::RadialMeasure::stable(q, padic::autophage_exponent(p), 1.0));
    // Annihilator of p Z_p is p^{-1} Z_p / p^m Z_p, of order p^{m+1}.
    ok = ok && std::abs(res - expected) <= 1e-14 && haar_p.order == q.pow(q.m() + 1) && !haar_p.full &&
         stable.full && stable.order == 1;
    detail += std::string(detail.empty() ? "" : "; ") + "p=" + std::to_string(p) + ": TV " + fmt("%.15f", res) +
              ", |K(haar pZ_p)| = " + std::to_string(haar_p.order) + ", |K(stable)| = " + std::to_string(stable.order);
  }
  // Dense cross-check on a small quotient.
  const padic::Quotient small(3, 2, 4);
  const double dense = padic::autophage_residual_padic(padic::QuotientMeasure::haar_ball(small, 0), by_p, by_p);
  ok = ok && std::abs(dense - 2.0 / 3.0) <= 1e-14;
  return {ok, detail + "; dense p=3 TV " + fmt("%.15f", dense)};
}

Outcome fullness() {
  Gen gen(77);
  std::size_t singular_found = 0, pd_found = 0;
  const GridSpec grid = GridSpec::default_for(3);
  for (int i = 0; i < 10; ++i) {
    const LinearMap q = gen.orthogonal(3);
    const LinearMap singular = with_spectrum(q, {gen.uniform(0.2, 2.0), gen.uniform(0.2, 2.0), 0.0});
    if (fullness_check(CharFnModel::gaussian(singular), grid).witness_found) ++singular_found;
    const LinearMap pd = with_spectrum(q, {gen.uniform(0.2, 2.0), gen.uniform(0.2, 2.0), gen.uniform(0.2, 2.0)});
    if (fullness_check(CharFnModel::gaussian(pd), grid).witness_found) ++pd_found;
  }
  return {singular_found == 10 && pd_found == 0, "witness for " + std::to_string(singular_found) +
                                                     "/10 singular P, " + std::to_string(pd_found) +
                                                     "/10 positive-definite P"};
}

Outcome semistable() {
  bool ok = true;
  double worst = 0.0;
  std::size_t certified = 0, total = 0;
  for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
    const CharFnModel model = CharFnModel::sym_stable(alpha, 1.0, 1);
    for (unsigned n : {2u, 3u, 5u}) {
      const LinearMap t = LinearMap::scalar(1, std::pow(static_cast<double>(n), -1.0 / alpha));
      worst = std::max(worst, semistable_residual(model, t, n, GridSpec::default_for(1)).max_residual);
      const std::vector<LinearMap> maps(n, t);
      const DensityCertificate cert = certify_density(model, maps);
      ++total;
      if (cert.certified()) ++certified;
    }
  }
  ok = worst <= 1e-10 && certified == total;
  return {ok, "max semistable residual " + sci(worst) + " (<=1e-10), certified densities " +
                  std::to_string(certified) + "/" + std::to_string(total)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "Gaussian construction", 10.0, gaussian_construction},
      {2, "decay exponent", 1.0, decay_exponent},
      {3, "decay bound", 5.0, decay_bound},
      {4, "Fourier inversion", 5.0, density_inversion},
      {5, "triangular system", 60.0, triangular_system},
      {6, "p-adic autophage instance", 30.0, padic_instance},
      {7, "idempotent exclusion", 10.0, idempotent_exclusion},
      {8, "fullness", 5.0, fullness},
      {9, "semistable", 10.0, semistable},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = out.pass && secs <= c.budget_s;
    if (!pass) ++failures;
    std::printf("[%s] %d %s: %s [%.2f s / %.0f s]\n", pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(), secs,
                c.budget_s);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
