#include "autophage/sampler.hpp"

#include "autophage/random.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace autophage {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::uint64_t binomial(unsigned n, unsigned k) {
  std::uint64_t r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

bool commute(const LinearMap& t, const LinearMap& s) {
  return operator_norm(commutator(t, s)) <= commutation_tolerance(t, s);
}

void add_scaled(Vector& acc, const LinearMap& a, const Vector& y) {
  const std::size_t d = a.dim();
  for (std::size_t i = 0; i < d; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += a(i, j) * y[j];
    acc[i] += s;
  }
}

double norm(const Vector& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

}  // namespace

SeedDistribution::SeedDistribution(Variant seed, std::size_t dim) : seed_(std::move(seed)), dim_(dim) {}

SeedDistribution SeedDistribution::gaussian(LinearMap covariance) {
  const std::size_t d = covariance.dim();
  LinearMap root = symmetric_sqrt(covariance);  // validates symmetric PSD
  SeedDistribution out(GaussianSeed{std::move(covariance)}, d);
  out.covariance_root_ = std::move(root);
  return out;
}

SeedDistribution SeedDistribution::uniform_box(Vector half_widths) {
  if (half_widths.empty()) throw std::invalid_argument("uniform seed: dim must be >= 1");
  for (double h : half_widths)
    if (!(h > 0.0)) throw std::invalid_argument("uniform seed: half-widths must be positive");
  const std::size_t d = half_widths.size();
  return SeedDistribution(UniformBoxSeed{std::move(half_widths)}, d);
}

SeedDistribution SeedDistribution::point(Vector x) {
  if (x.empty()) throw std::invalid_argument("point seed: dim must be >= 1");
  const std::size_t d = x.size();
  return SeedDistribution(PointSeed{std::move(x)}, d);
}

double SeedDistribution::second_moment() const {
  return std::visit(overloaded{
                        [](const GaussianSeed& g) {
                          double tr = 0.0;
                          for (std::size_t i = 0; i < g.covariance.dim(); ++i) tr += g.covariance(i, i);
                          return tr;
                        },
                        [](const UniformBoxSeed& u) {
                          double acc = 0.0;
                          for (double h : u.half_widths) acc += h * h / 3.0;
                          return acc;
                        },
                        [](const PointSeed& p) { return norm(p.point) * norm(p.point); },
                    },
                    seed_);
}

double SeedDistribution::support_radius() const {
  return std::visit(overloaded{
                        [](const GaussianSeed&) { return std::numeric_limits<double>::infinity(); },
                        [](const UniformBoxSeed& u) { return norm(u.half_widths); },
                        [](const PointSeed& p) { return norm(p.point); },
                    },
                    seed_);
}

LinearMap SeedDistribution::covariance() const {
  return std::visit(overloaded{
                        [](const GaussianSeed& g) { return g.covariance; },
                        [](const UniformBoxSeed& u) {
                          Vector diag;
                          for (double h : u.half_widths) diag.push_back(h * h / 3.0);
                          return LinearMap::diagonal(diag);
                        },
                        [&](const PointSeed&) { return LinearMap(dim_); },
                    },
                    seed_);
}

/// Draws the sum of `multiplicity` independent copies of the seed.
class SeedSampler {
 public:
  explicit SeedSampler(const SeedDistribution& seed) : seed_(seed), z_(seed.dim()) {}

  Vector draw_sum(std::uint64_t multiplicity, CounterRng& rng) {
    const std::size_t d = seed_.dim();
    Vector out(d, 0.0);
    std::visit(overloaded{
                   [&](const GaussianSeed&) {
                     for (double& z : z_) z = rng.normal();
                     const double scale = std::sqrt(static_cast<double>(multiplicity));
                     add_scaled(out, seed_.covariance_root_, z_);
                     for (double& x : out) x *= scale;
                   },
                   [&](const UniformBoxSeed& u) {
                     for (std::uint64_t c = 0; c < multiplicity; ++c)
                       for (std::size_t k = 0; k < d; ++k) out[k] += u.half_widths[k] * (2.0 * rng.uniform() - 1.0);
                   },
                   [&](const PointSeed& p) {
                     for (std::size_t k = 0; k < d; ++k) out[k] = static_cast<double>(multiplicity) * p.point[k];
                   },
               },
               seed_.variant());
    return out;
  }

 private:
  const SeedDistribution& seed_;
  Vector z_;
};

SampleBatch tree_sample(const LinearMap& t, const LinearMap& s, const SeedDistribution& seed, unsigned depth,
                        std::size_t count, std::uint64_t rng_seed) {
  if (t.dim() != seed.dim() || s.dim() != seed.dim()) throw std::invalid_argument("tree_sample: dimension mismatch");
  if (depth > kMaxTreeDepth) throw std::length_error("tree_sample: depth exceeds " + std::to_string(kMaxTreeDepth));
  if (count == 0) throw std::invalid_argument("tree_sample: count must be >= 1");
  if (operator_norm(t) >= 1.0 || operator_norm(s) >= 1.0)
    throw std::invalid_argument("tree_sample: T and S must be strict contractions");

  SampleBatch batch;
  batch.depth = depth;
  batch.word_count = std::uint64_t{1} << depth;
  batch.rng_seed = rng_seed;
  batch.points.assign(count, Vector(seed.dim(), 0.0));
  SeedSampler sampler(seed);

  if (commute(t, s)) {
    for (unsigned i = 0; i <= depth; ++i) {
      const LinearMap product = power(t, depth - i) * power(s, i);
      const std::uint64_t mult = binomial(depth, i);
      for (std::size_t r = 0; r < count; ++r) {
        CounterRng rng(rng_seed, i, r);
        add_scaled(batch.points[r], product, sampler.draw_sum(mult, rng));
      }
    }
    return batch;
  }

  std::uint64_t word_index = 0;
  for_each_word(t, s, depth, [&](const OperatorWord& w) {
    for (std::size_t r = 0; r < count; ++r) {
      CounterRng rng(rng_seed, word_index, r);
      add_scaled(batch.points[r], w.product, sampler.draw_sum(1, rng));
    }
    ++word_index;
  });
  return batch;
}

LinearMap tree_covariance(const LinearMap& t, const LinearMap& s, const SeedDistribution& seed, unsigned depth) {
  if (t.dim() != seed.dim() || s.dim() != seed.dim()) throw std::invalid_argument("tree_covariance: dimension mismatch");
  const LinearMap c = seed.covariance();
  LinearMap acc(seed.dim());
  if (commute(t, s)) {
    for (unsigned i = 0; i <= depth; ++i) {
      const LinearMap a = power(t, depth - i) * power(s, i);
      LinearMap term = a * c * a.adjoint();
      term *= static_cast<double>(binomial(depth, i));
      acc += term;
    }
    return acc;
  }
  for_each_word(t, s, depth, [&](const OperatorWord& w) { acc += w.product * c * w.product.adjoint(); });
  return acc;
}

std::vector<double> infinitesimality_profile(const LinearMap& t, const LinearMap& s, const SeedDistribution& seed,
                                             double epsilon, unsigned n_max, std::size_t count,
                                             std::uint64_t rng_seed) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("infinitesimality_profile: epsilon must be positive");
  if (count == 0) throw std::invalid_argument("infinitesimality_profile: count must be >= 1");
  if (t.dim() != seed.dim() || s.dim() != seed.dim())
    throw std::invalid_argument("infinitesimality_profile: dimension mismatch");

  SeedSampler sampler(seed);
  std::vector<Vector> draws;
  draws.reserve(count);
  for (std::size_t r = 0; r < count; ++r) {
    CounterRng rng(rng_seed, 0, r);
    draws.push_back(sampler.draw_sum(1, rng));
  }

  auto exceed_fraction = [&](const LinearMap& a) {
    std::size_t hits = 0;
    for (const auto& y : draws) {
      Vector img(y.size(), 0.0);
      add_scaled(img, a, y);
      if (norm(img) > epsilon) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(count);
  };

  const bool commuting = commute(t, s);
  std::vector<double> profile;
  profile.reserve(n_max + 1);
  for (unsigned n = 0; n <= n_max; ++n) {
    double p = 0.0;
    if (commuting) {
      for (unsigned i = 0; i <= n; ++i) p = std::max(p, exceed_fraction(power(t, n - i) * power(s, i)));
    } else {
      for_each_word(t, s, n, [&](const OperatorWord& w) { p = std::max(p, exceed_fraction(w.product)); });
    }
    profile.push_back(p);
  }
  return profile;
}

unsigned chebyshev_index(const LinearMap& t, const LinearMap& s, const SeedDistribution& seed, double epsilon,
                         double level, unsigned cap) {
  const double moment = seed.second_moment();
  for (unsigned n = 0; n <= cap; ++n) {
    const double w = max_word_norm(t, s, n, cap);
    if (w * w * moment / (epsilon * epsilon) <= level) return n;
  }
  throw std::domain_error("chebyshev_index: bound not reached within cap");
}

std::complex<double> empirical_cf(const SampleBatch& batch, std::span<const double> v) {
  if (batch.points.empty()) throw std::invalid_argument("empirical_cf: empty batch");
  double re = 0.0, im = 0.0;
  for (const auto& x : batch.points) {
    if (x.size() != v.size()) throw std::invalid_argument("empirical_cf: dimension mismatch");
    double phase = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) phase += v[i] * x[i];
    re += std::cos(phase);
    im += std::sin(phase);
  }
  const double n = static_cast<double>(batch.points.size());
  return {re / n, im / n};
}

LinearMap empirical_covariance(const SampleBatch& batch) {
  if (batch.points.empty()) throw std::invalid_argument("empirical_covariance: empty batch");
  const std::size_t d = batch.points.front().size();
  const double n = static_cast<double>(batch.points.size());
  Vector mean(d, 0.0);
  for (const auto& x : batch.points)
    for (std::size_t i = 0; i < d; ++i) mean[i] += x[i] / n;
  LinearMap cov(d);
  for (const auto& x : batch.points)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) cov(i, j) += (x[i] - mean[i]) * (x[j] - mean[j]) / n;
  return cov;
}

}  // namespace autophage
