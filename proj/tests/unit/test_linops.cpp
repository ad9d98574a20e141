#include "autophage/error.hpp"
#include "autophage/linops.hpp"
#include "support.hpp"

#include <Eigen/Dense>
#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>

using namespace autophage;
using autophage::testing::Gen;

namespace {

Eigen::MatrixXd to_eigen(const LinearMap& a) {
  Eigen::MatrixXd m(a.dim(), a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) m(i, j) = a(i, j);
  return m;
}

double svd_max(const LinearMap& a) { return Eigen::JacobiSVD<Eigen::MatrixXd>(to_eigen(a)).singularValues()(0); }

double svd_min(const LinearMap& a) {
  const auto sv = Eigen::JacobiSVD<Eigen::MatrixXd>(to_eigen(a)).singularValues();
  return sv(sv.size() - 1);
}

double vec_norm(const Vector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("LinearMap construction and adjoint") {
  const LinearMap a{{1.0, 2.0}, {3.0, 4.0}};
  CHECK(a.dim() == 2);
  CHECK(a(0, 1) == 2.0);
  CHECK(a.adjoint()(0, 1) == 3.0);
  CHECK(a.adjoint().adjoint() == a);
  CHECK_THROWS_AS(LinearMap(0), std::invalid_argument);
  CHECK_THROWS_AS(LinearMap(2, {1.0, 2.0, 3.0}), std::invalid_argument);
  CHECK_THROWS_AS((LinearMap{{1.0, NAN}, {0.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS((LinearMap{{1.0, 2.0}, {3.0}}), std::invalid_argument);
  CHECK_THROWS_AS(a * LinearMap::identity(3), std::invalid_argument);
}

TEST_CASE("operator norm on closed-form cases") {
  CHECK(operator_norm(LinearMap::identity(2)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(operator_norm(LinearMap::diagonal({0.6, 0.5})) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(operator_norm(LinearMap{{0.0, 2.0}, {0.0, 0.0}}) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(operator_norm(LinearMap(3)) == 0.0);
}

TEST_CASE("operator norm matches an SVD oracle and sphere sampling") {
  Gen gen(1);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 1 + gen.index(8);
    const LinearMap a = gen.matrix(d, -3.0, 3.0);
    CHECK(std::abs(operator_norm(a) - svd_max(a)) <= 1e-10 * svd_max(a));
    CHECK(std::abs(smallest_singular_value(a) - svd_min(a)) <= 1e-9 * svd_max(a));
  }

  const LinearMap a = gen.matrix(3);
  double sampled = 0.0;
  for (int i = 0; i < 100000; ++i) {
    Vector x{gen.normal(), gen.normal(), gen.normal()};
    const double n = vec_norm(x);
    for (double& xi : x) xi /= n;
    sampled = std::max(sampled, vec_norm(a.apply(x)));
  }
  CHECK(sampled <= operator_norm(a) + 1e-12);
  CHECK(operator_norm(a) - sampled <= 1e-3);
}

TEST_CASE("clustered singular values converge") {
  Gen gen(2);
  const LinearMap q = gen.orthogonal(4);
  const LinearMap a = autophage::testing::with_spectrum(q, {0.9, 0.9 - 1e-9, 0.9 - 2e-9, 0.1});
  CHECK(std::abs(operator_norm(a) - 0.9) <= 1e-10);
}

TEST_CASE("norm properties: adjoint invariance and submultiplicativity") {
  Gen gen(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 1 + gen.index(6);
    const LinearMap a = gen.matrix(d, -2.0, 2.0), b = gen.matrix(d, -2.0, 2.0);
    CHECK(std::abs(operator_norm(a.adjoint()) - operator_norm(a)) <= 1e-10 * (1.0 + operator_norm(a)));
    CHECK(operator_norm(a * b) <= operator_norm(a) * operator_norm(b) * (1.0 + 1e-10) + 1e-12);
  }
}

TEST_CASE("inverse and singular maps") {
  Gen gen(4);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t d = 1 + gen.index(6);
    LinearMap a = gen.matrix(d);
    for (std::size_t i = 0; i < d; ++i) a(i, i) += 3.0;
    CHECK(autophage::testing::max_abs_diff(a * inverse(a), LinearMap::identity(d)) <= 1e-12);
  }
  CHECK_THROWS_AS(inverse(LinearMap{{1.0, 2.0}, {2.0, 4.0}}), std::domain_error);
  CHECK(smallest_singular_value(LinearMap{{1.0, 2.0}, {2.0, 4.0}}) <= 1e-12);
}

TEST_CASE("symmetric eigendecomposition and square root") {
  Gen gen(5);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t d = 1 + gen.index(7);
    const LinearMap q = gen.orthogonal(d);
    Vector eig(d);
    for (double& e : eig) e = gen.uniform(0.0, 3.0);
    const LinearMap p = autophage::testing::with_spectrum(q, eig);
    const SymmetricEigen se = symmetric_eigen(p);
    std::sort(eig.begin(), eig.end());
    for (std::size_t i = 0; i < d; ++i) CHECK(std::abs(se.values[i] - eig[i]) <= 1e-12 * 3.0);
    const LinearMap root = symmetric_sqrt(p);
    CHECK(autophage::testing::max_abs_diff(root * root, p) <= 1e-12);
    CHECK(root.is_symmetric(1e-14));
  }
  CHECK_THROWS_AS(symmetric_sqrt(LinearMap::diagonal({1.0, -1.0})), std::domain_error);
}

TEST_CASE("validate_system classification") {
  const std::vector<LinearMap> scalars{LinearMap::scalar(2, 0.6), LinearMap::scalar(2, 0.8)};
  const SystemReport rep = validate_system(scalars);
  CHECK(rep.kinds[0] == ContractionKind::strict);
  CHECK(rep.kinds[1] == ContractionKind::strict);
  CHECK(rep.commutator_norms[0][1] == 0.0);
  CHECK(rep.invertible[0]);

  const std::vector<LinearMap> jordan{LinearMap{{0.9, 10.0}, {0.0, 0.9}}};
  const SystemReport jr = validate_system(jordan);
  CHECK(jr.kinds[0] == ContractionKind::eventual);
  CHECK(jr.norms[0] > 1.0);
  CHECK(jr.spectral_radii[0] == doctest::Approx(0.9).epsilon(1e-9));

  const std::vector<LinearMap> expanding{LinearMap::scalar(1, 1.5)};
  CHECK(validate_system(expanding).kinds[0] == ContractionKind::none);
  CHECK(to_string(ContractionKind::eventual) == "eventual");
}

TEST_CASE("rotations commute with homotheties, shears do not") {
  const LinearMap rot = 0.5 * LinearMap{{0.0, -1.0}, {1.0, 0.0}};
  const std::vector<LinearMap> ok{LinearMap::scalar(2, 0.5), rot};
  CHECK_NOTHROW(validate_system(ok));

  const LinearMap shear{{0.5, 0.1}, {0.0, 0.5}};
  // A scalar map commutes with any matrix, shear included.
  const std::vector<LinearMap> scalar_shear{LinearMap::scalar(2, 0.5), shear};
  CHECK_NOTHROW(validate_system(scalar_shear));

  const std::vector<LinearMap> bad{rot, shear};
  try {
    validate_system(bad);
    FAIL("expected NonCommutingError");
  } catch (const NonCommutingError& e) {
    CHECK(e.first() == 0);
    CHECK(e.second() == 1);
    // [0.5 R, 0.1 E12] = 0.05 diag(-1, 1).
    CHECK(e.commutator_norm() == doctest::Approx(0.05).epsilon(1e-12));
  }
}

TEST_CASE("ContractionSystem requires invertible contractions") {
  CHECK_NOTHROW(ContractionSystem({LinearMap::scalar(2, 0.6), LinearMap::scalar(2, 0.8)}));
  CHECK_THROWS(ContractionSystem({LinearMap::diagonal({0.5, 0.0}), LinearMap::scalar(2, 0.5)}));
  CHECK_THROWS(ContractionSystem({LinearMap::scalar(2, 1.2), LinearMap::scalar(2, 0.5)}));
}

TEST_CASE("power_until_strict") {
  CHECK(power_until_strict(LinearMap::scalar(2, 0.6)) == 1);
  const LinearMap jordan{{0.9, 10.0}, {0.0, 0.9}};
  const unsigned k = power_until_strict(jordan);
  // Independent oracle: iterate powers and check the norm with the SVD.
  LinearMap acc = LinearMap::identity(2);
  unsigned expect = 0;
  for (unsigned i = 1; i <= 1000; ++i) {
    acc = acc * jordan;
    if (svd_max(acc) < 1.0) {
      expect = i;
      break;
    }
  }
  CHECK(k == expect);
  CHECK(k > 1);
  CHECK_THROWS_AS(power_until_strict(LinearMap::identity(2), 100), Error);
}

TEST_CASE("word enumeration") {
  const LinearMap t{{0.5, 0.1}, {0.0, 0.4}};
  const LinearMap s{{0.3, 0.0}, {0.2, 0.6}};

  const auto w0 = enumerate_words(t, s, 0);
  REQUIRE(w0.size() == 1);
  CHECK(w0[0].product == LinearMap::identity(2));
  CHECK(w0[0].length() == 0);

  const auto w2 = enumerate_words(t, s, 2);
  REQUIRE(w2.size() == 4);
  CHECK(autophage::testing::max_abs_diff(w2[0].product, t * t) <= 1e-15);
  CHECK(autophage::testing::max_abs_diff(w2[1].product, t * s) <= 1e-15);
  CHECK(autophage::testing::max_abs_diff(w2[2].product, s * t) <= 1e-15);
  CHECK(autophage::testing::max_abs_diff(w2[3].product, s * s) <= 1e-15);

  CHECK(enumerate_words(t, s, 10).size() == 1024);
  CHECK_THROWS_AS(enumerate_words(t, s, 25), std::length_error);
  CHECK_THROWS_AS(enumerate_words(t, s, 5, 4), std::length_error);
}

TEST_CASE("words: concatenation, letter counts and norm bounds") {
  Gen gen(6);
  for (int trial = 0; trial < 10; ++trial) {
    const LinearMap t = 0.3 * gen.matrix(3), s = 0.3 * gen.matrix(3);
    const double nt = operator_norm(t), ns = operator_norm(s);
    const auto words = enumerate_words(t, s, 6);
    for (const auto& w : words) {
      LinearMap direct = LinearMap::identity(3);
      for (Letter l : w.letters) direct = direct * (l == Letter::first ? t : s);
      CHECK(autophage::testing::max_abs_diff(direct, w.product) <= 1e-12);
      const auto i = w.count(Letter::second);
      CHECK(w.count(Letter::first) + i == 6);
      CHECK(operator_norm(w.product) <= std::pow(nt, 6.0 - i) * std::pow(ns, i) * (1.0 + 1e-10));
    }
    // product(alpha beta) = product(alpha) product(beta)
    const auto w3 = enumerate_words(t, s, 3);
    for (int k = 0; k < 20; ++k) {
      const auto& a = w3[gen.index(w3.size())];
      const auto& b = w3[gen.index(w3.size())];
      std::size_t idx = 0;
      for (Letter l : a.letters) idx = 2 * idx + (l == Letter::second);
      for (Letter l : b.letters) idx = 2 * idx + (l == Letter::second);
      CHECK(autophage::testing::max_abs_diff(words[idx].product, a.product * b.product) <= 1e-12);
    }
  }
}

TEST_CASE("commuting words collapse to binomial classes") {
  const LinearMap t = LinearMap::diagonal({0.5, 0.3}), s = LinearMap::diagonal({0.2, 0.7});
  std::map<std::pair<long long, long long>, int> classes;
  for (const auto& w : enumerate_words(t, s, 5)) {
    const auto key = std::make_pair(std::llround(w.product(0, 0) * 1e12), std::llround(w.product(1, 1) * 1e12));
    ++classes[key];
  }
  std::vector<int> mult;
  for (const auto& [k, v] : classes) mult.push_back(v);
  std::sort(mult.begin(), mult.end());
  CHECK(mult == std::vector<int>{1, 1, 5, 5, 10, 10});
}

TEST_CASE("max word norm") {
  CHECK(max_word_norm(LinearMap::scalar(2, 0.5), LinearMap::scalar(2, 0.5), 3) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(max_word_norm(LinearMap::scalar(2, 0.6), LinearMap::scalar(2, 0.5), 4) == doctest::Approx(0.1296).epsilon(1e-12));

  Gen gen(7);
  for (int trial = 0; trial < 10; ++trial) {
    const LinearMap t = 0.4 * gen.matrix(2), s = 0.4 * gen.matrix(2);
    for (unsigned n = 0; n <= 8; ++n) {
      double brute = 0.0;
      for (const auto& w : enumerate_words(t, s, n)) brute = std::max(brute, svd_max(w.product));
      CHECK(std::abs(max_word_norm(t, s, n) - brute) <= 1e-10);
    }
  }

  // Commuting shortcut against the exhaustive route.
  const LinearMap t = LinearMap::diagonal({0.7, 0.2}), s = LinearMap::diagonal({0.3, 0.8});
  for (unsigned n = 1; n <= 10; ++n) {
    double brute = 0.0;
    for (const auto& w : enumerate_words(t, s, n)) brute = std::max(brute, svd_max(w.product));
    CHECK(std::abs(max_word_norm(t, s, n) - brute) <= 1e-12);
    CHECK(max_word_norm(t, s, n) <= std::pow(0.8, n) + 1e-15);
  }
}

TEST_CASE("max word norm decreases once powers are strict") {
  const LinearMap t{{0.5, 0.6}, {0.0, 0.5}};
  const LinearMap s = LinearMap::scalar(2, 0.5);
  double prev = max_word_norm(t, s, 1);
  for (unsigned n = 2; n <= 14; ++n) {
    const double cur = max_word_norm(t, s, n);
    CHECK(cur <= prev + 1e-15);
    prev = cur;
  }
  CHECK(prev < 1e-2);
}
