#pragma once

// Hand-rolled generators for property tests: random orthogonal bases,
// symmetric matrices with prescribed spectra, and commuting pairs.

#include "autophage/linops.hpp"
#include "autophage/random.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace autophage::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed, std::uint64_t stream = 0) : rng_(seed, stream) {}

  double uniform(double lo, double hi) { return lo + (hi - lo) * rng_.uniform(); }
  double normal() { return rng_.normal(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(rng_.uniform() * static_cast<double>(n)); }

  Vector vector(std::size_t d, double lo = -1.0, double hi = 1.0) {
    Vector v(d);
    for (double& x : v) x = uniform(lo, hi);
    return v;
  }

  LinearMap matrix(std::size_t d, double lo = -1.0, double hi = 1.0) {
    LinearMap a(d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) a(i, j) = uniform(lo, hi);
    return a;
  }

  /// Haar-ish orthogonal matrix by Gram-Schmidt on Gaussian columns.
  LinearMap orthogonal(std::size_t d) {
    std::vector<Vector> cols;
    while (cols.size() < d) {
      Vector v(d);
      for (double& x : v) x = normal();
      for (const auto& c : cols) {
        double dot = 0.0;
        for (std::size_t i = 0; i < d; ++i) dot += v[i] * c[i];
        for (std::size_t i = 0; i < d; ++i) v[i] -= dot * c[i];
      }
      double n = 0.0;
      for (double x : v) n += x * x;
      n = std::sqrt(n);
      if (n < 1e-6) continue;
      for (double& x : v) x /= n;
      cols.push_back(v);
    }
    LinearMap q(d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) q(i, j) = cols[j][i];
    return q;
  }

 private:
  CounterRng rng_;
};

/// Q diag(eigenvalues) Q^T.
inline LinearMap with_spectrum(const LinearMap& q, const Vector& eigenvalues) {
  return q * LinearMap::diagonal(eigenvalues) * q.adjoint();
}

inline double max_abs_diff(const LinearMap& a, const LinearMap& b) { return (a - b).max_abs(); }

}  // namespace autophage::testing
