#pragma once

// Finite-precision model of probability measures on Q_p.
//
// G = p^{-m} Z_p / p^k Z_p is represented by residues a mod p^{m+k}, with the
// element value a * p^{-m}. Its dual p^{-k} Z_p / p^m Z_p is represented the
// same way, b mod p^{m+k} standing for w = b * p^{-k}, and the pairing is
// chi_w(x) = exp(2 pi i a b / p^{m+k}).
//
// Two representations share the API:
//   QuotientMeasure  one weight per group element (order capped, default 1e6)
//   RadialMeasure    measures invariant under multiplication by units, stored
//                    as coefficients on the Haar measures of the balls
//                    B_i = {a : v_p(a) >= i}; exact at any precision.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace autophage::padic {

class Quotient {
 public:
  Quotient(unsigned p, unsigned m, unsigned k);

  unsigned p() const noexcept { return p_; }
  unsigned m() const noexcept { return m_; }
  unsigned k() const noexcept { return k_; }
  /// m + k; the order is p^exponent.
  unsigned exponent() const noexcept { return m_ + k_; }
  std::uint64_t order() const noexcept { return order_; }
  std::uint64_t pow(unsigned e) const;

  /// v_p of the residue (exponent() for 0).
  unsigned residue_valuation(std::uint64_t a) const;
  /// p-adic absolute value of the element a * p^{-m}; 0 for the zero class.
  double norm(std::uint64_t a) const;
  /// p-adic absolute value of the dual element b * p^{-k}; 0 for the zero class.
  double dual_norm(std::uint64_t b) const;
  /// Residue of the element with value p^j (j in [-m, k)).
  std::uint64_t element_of_power(int j) const;

  friend bool operator==(const Quotient&, const Quotient&) = default;

 private:
  unsigned p_, m_, k_;
  std::uint64_t order_;
};

double padic_norm(const Quotient& q, std::uint64_t a);

/// Contraction x -> p^power * unit * x (operator norm p^{-power}).
struct Scaling {
  std::uint64_t unit = 1;
  unsigned power = 1;
};

inline constexpr std::uint64_t kDenseOrderCap = 1'000'000;

/// r with 2 p^{-r} = 1: the exponent making the stable law autophage under T = S = (p.).
double autophage_exponent(unsigned p);

// ---------------------------------------------------------------------------

class QuotientMeasure {
 public:
  /// Weights must be >= -1e-12 (clamped to 0) and sum to 1 within 1e-12.
  QuotientMeasure(Quotient q, std::vector<double> weights);

  static QuotientMeasure dirac(const Quotient& q, std::uint64_t a);
  /// Haar measure of p^j Z_p / p^k Z_p, -m <= j <= k.
  static QuotientMeasure haar_ball(const Quotient& q, int j);

  const Quotient& quotient() const noexcept { return q_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double total_mass() const;
  double max_support_norm(double threshold = 0.0) const;

 private:
  Quotient q_;
  std::vector<double> weights_;
};

/// Throws std::length_error when p^{m+k} exceeds the dense cap.
void check_dense_order(const Quotient& q, std::uint64_t cap = kDenseOrderCap);

QuotientMeasure convolve(const QuotientMeasure& mu, const QuotientMeasure& nu);

/// Pushforward under x -> p^j u x. Throws PrecisionError unless 1 <= j <= k,
/// std::invalid_argument unless u is a unit.
QuotientMeasure apply_scaling(const QuotientMeasure& mu, Scaling scaling);

/// mu^(b) = sum_a mu(a) exp(2 pi i a b / p^{m+k}).
std::vector<std::complex<double>> transform(const QuotientMeasure& mu);

double total_variation(const QuotientMeasure& mu, const QuotientMeasure& nu);

/// Inverse transform of exp(-c |w|_p^r). Throws PrecisionError if a weight
/// falls below -1e-9.
QuotientMeasure padic_stable(const Quotient& q, double r, double c);

/// |mu - T(mu) * S(mu)|_TV.
double autophage_residual_padic(const QuotientMeasure& mu, Scaling t, Scaling s);

struct SubgroupReport {
  std::uint64_t order = 0;
  /// K = {b : v_p(b) >= generator_valuation} = <p^generator_valuation>.
  unsigned generator_valuation = 0;
  std::uint64_t generator = 0;
  bool full = false;                 // K = {0}
  bool invariant_under_pair = false; // K = T^*(K) + S^*(K)
  /// Number of applications of K -> T^*(K) + S^*(K) until K = {0}.
  unsigned steps_to_trivial = 0;
};

/// K = {b : |mu^(b)| >= 1 - tol}. Throws autophage::Error if K is not a subgroup.
SubgroupReport unit_modulus_subgroup(const QuotientMeasure& mu, Scaling t = {}, Scaling s = {}, double tol = 1e-9);

// ---------------------------------------------------------------------------

class RadialMeasure {
 public:
  /// coefficients[i] multiplies Haar(B_i), i = 0..m+k.
  RadialMeasure(Quotient q, std::vector<double> coefficients);

  static RadialMeasure dirac_zero(const Quotient& q);
  static RadialMeasure haar_ball(const Quotient& q, int j);
  static RadialMeasure stable(const Quotient& q, double r, double c);

  const Quotient& quotient() const noexcept { return q_; }
  std::span<const double> coefficients() const noexcept { return coef_; }

  /// Mass of {a : v_p(a) = j}, j = 0..m+k (j = m+k is the zero class).
  std::vector<double> shell_masses() const;
  /// Transform value on dual elements of residue valuation j.
  double transform_at_valuation(unsigned j) const;
  QuotientMeasure to_dense(std::uint64_t cap = kDenseOrderCap) const;

 private:
  Quotient q_;
  std::vector<double> coef_;
};

RadialMeasure convolve(const RadialMeasure& mu, const RadialMeasure& nu);
RadialMeasure apply_scaling(const RadialMeasure& mu, Scaling scaling);
double total_variation(const RadialMeasure& mu, const RadialMeasure& nu);
double autophage_residual_padic(const RadialMeasure& mu, Scaling t, Scaling s);
SubgroupReport unit_modulus_subgroup(const RadialMeasure& mu, Scaling t = {}, Scaling s = {}, double tol = 1e-9);

}  // namespace autophage::padic
