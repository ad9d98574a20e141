#include "autophage/random.hpp"
#include "autophage/stats.hpp"

#include <boost/math/distributions/normal.hpp>
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <vector>

using namespace autophage;

TEST_CASE("counter RNG is a pure function of its key") {
  CounterRng a(42, 3, 7), b(42, 3, 7), c(42, 3, 8), d(42, 4, 7);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
    CHECK(x != d());
  }
  CHECK(a.counter() == 100);
  std::set<std::uint64_t> seen;
  CounterRng e(1);
  for (int i = 0; i < 10000; ++i) seen.insert(e());
  CHECK(seen.size() == 10000);
}

TEST_CASE("uniform and normal draws have the right moments") {
  CounterRng rng(9);
  const int n = 200000;
  double su = 0.0, su2 = 0.0, sz = 0.0, sz2 = 0.0, sz4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK_FALSE((u < 0.0 || u >= 1.0));
    su += u;
    su2 += u * u;
    const double z = rng.normal();
    sz += z;
    sz2 += z * z;
    sz4 += z * z * z * z;
  }
  CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(su2 / n == doctest::Approx(1.0 / 3.0).epsilon(0.01));
  CHECK(std::abs(sz / n) < 0.01);
  CHECK(sz2 / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(sz4 / n == doctest::Approx(3.0).epsilon(0.03));
}

TEST_CASE("normal CDF against Boost") {
  const boost::math::normal_distribution<double> nd(0.5, 2.0);
  for (double x = -8.0; x <= 8.0; x += 0.25)
    CHECK(std::abs(stats::normal_cdf(x, 0.5, 2.0) - boost::math::cdf(nd, x)) <= 1e-15);
}

TEST_CASE("KS statistic on known samples") {
  // Uniform CDF on {0.1, 0.4, 0.7}: sup gap is max(1/3-0.1, 0.4-1/3, 2/3-0.4, 0.7-2/3, 1-0.7) = 0.3.
  const std::vector<double> xs{0.7, 0.1, 0.4};
  CHECK(stats::ks_statistic(xs, [](double x) { return x; }) == doctest::Approx(0.3));

  const std::vector<double> a{1.0, 2.0, 3.0}, b{1.5, 2.5, 3.5, 4.5};
  // Empirical CDFs differ most at x = 3.x: 1 vs 0.5.
  CHECK(stats::ks_two_sample(a, b) == doctest::Approx(0.5));
}

TEST_CASE("Kolmogorov tail against the theta-function form of the CDF") {
  const double pi = std::numbers::pi;
  for (double lambda : {0.3, 0.5, 0.8, 1.0, 1.36, 1.63, 2.0}) {
    // P(K <= x) = sqrt(2 pi)/x sum_j exp(-(2j-1)^2 pi^2 / (8 x^2))
    double cdf = 0.0;
    for (int j = 1; j <= 50; ++j) cdf += std::exp(-(2.0 * j - 1) * (2.0 * j - 1) * pi * pi / (8.0 * lambda * lambda));
    cdf *= std::sqrt(2.0 * pi) / lambda;
    CHECK(stats::kolmogorov_tail(lambda) == doctest::Approx(1.0 - cdf).epsilon(1e-10));
  }
  CHECK(stats::kolmogorov_tail(1.358) == doctest::Approx(0.05).epsilon(0.01));
}

TEST_CASE("two-sample p-values are calibrated") {
  CounterRng rng(17);
  int rejections = 0;
  const int trials = 400;
  for (int t = 0; t < trials; ++t) {
    std::vector<double> a(300), b(400);
    for (double& x : a) x = rng.normal();
    for (double& x : b) x = rng.normal();
    if (stats::ks_two_sample_pvalue(stats::ks_two_sample(a, b), a.size(), b.size()) < 0.05) ++rejections;
  }
  CHECK(rejections <= 40);  // nominal 20
  std::vector<double> a(500), b(500);
  for (double& x : a) x = rng.normal();
  for (double& x : b) x = rng.normal() + 0.5;
  CHECK(stats::ks_two_sample_pvalue(stats::ks_two_sample(a, b), 500, 500) < 1e-6);
}
