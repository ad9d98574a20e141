#pragma once

// Monte Carlo realization of the triangular decomposition
//   mu = prod_{l(alpha) = n} alpha(mu):
// a level-n sample is sum_{l(alpha)=n} alpha(Y_alpha) with independent seeds
// Y_alpha. For commuting T, S the 2^n words collapse to the n+1 letter-count
// classes T^{n-i} S^i with multiplicity C(n, i).

#include "autophage/linops.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace autophage {

/// Gaussian seed with covariance C (characteristic function exp(-<Cv,v>/2)).
struct GaussianSeed {
  LinearMap covariance;
};

/// Uniform on the box prod [-h_i, h_i].
struct UniformBoxSeed {
  Vector half_widths;
};

struct PointSeed {
  Vector point;
};

class SeedDistribution {
 public:
  using Variant = std::variant<GaussianSeed, UniformBoxSeed, PointSeed>;

  static SeedDistribution gaussian(LinearMap covariance);
  static SeedDistribution uniform_box(Vector half_widths);
  static SeedDistribution point(Vector x);

  std::size_t dim() const noexcept { return dim_; }
  const Variant& variant() const noexcept { return seed_; }

  /// E|Y|^2.
  double second_moment() const;
  /// Cov(Y); zero for point seeds.
  LinearMap covariance() const;
  /// sup |Y| for bounded seeds, +inf for Gaussian seeds.
  double support_radius() const;

 private:
  SeedDistribution(Variant seed, std::size_t dim);

  Variant seed_;
  std::size_t dim_;
  LinearMap covariance_root_;  // Gaussian only
  friend class SeedSampler;
};

struct SampleBatch {
  std::vector<Vector> points;
  unsigned depth = 0;
  std::uint64_t word_count = 1;  // 2^depth
  std::uint64_t rng_seed = 0;
};

inline constexpr unsigned kMaxTreeDepth = 24;

/// count independent realizations of the level-n word sum. Deterministic in
/// rng_seed; replicate i only depends on (rng_seed, i).
SampleBatch tree_sample(const LinearMap& t, const LinearMap& s, const SeedDistribution& seed, unsigned depth,
                        std::size_t count, std::uint64_t rng_seed);

/// Exact covariance of the level-n word sum: sum over words of alpha Cov(Y) alpha^*.
LinearMap tree_covariance(const LinearMap& t, const LinearMap& s, const SeedDistribution& seed, unsigned depth);

/// p_n = max over words of length n of the estimated P(|alpha Y| > epsilon),
/// for n = 0..n_max. The same `count` seed draws are reused for every class
/// and level (common random numbers).
std::vector<double> infinitesimality_profile(const LinearMap& t, const LinearMap& s, const SeedDistribution& seed,
                                             double epsilon, unsigned n_max, std::size_t count,
                                             std::uint64_t rng_seed = 0);

/// Smallest n with max_word_norm(n)^2 E|Y|^2 / epsilon^2 <= level (Chebyshev),
/// an index past which p_n <= level is guaranteed.
unsigned chebyshev_index(const LinearMap& t, const LinearMap& s, const SeedDistribution& seed, double epsilon,
                         double level, unsigned cap = 200);

/// Sample average of exp(i <v, x>).
std::complex<double> empirical_cf(const SampleBatch& batch, std::span<const double> v);

/// Empirical covariance (mean-centred, 1/n normalization).
LinearMap empirical_covariance(const SampleBatch& batch);

}  // namespace autophage
