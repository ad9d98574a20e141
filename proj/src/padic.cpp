#include "autophage/padic.hpp"

#include "autophage/error.hpp"
#include "autophage/fft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace autophage::padic {

namespace {

bool is_prime(unsigned p) {
  if (p < 2) return false;
  for (unsigned d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
  __extension__ using u128 = unsigned __int128;
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % n);
}

void require_same(const Quotient& a, const Quotient& b, const char* what) {
  if (!(a == b)) throw std::invalid_argument(std::string(what) + ": quotient mismatch");
}

void check_scaling(const Quotient& q, Scaling s) {
  if (s.power < 1 || s.power > q.k())
    throw PrecisionError("apply_scaling: power " + std::to_string(s.power) + " outside [1, k = " +
                         std::to_string(q.k()) + "]");
  if (s.unit % q.p() == 0) throw std::invalid_argument("apply_scaling: multiplier is not a unit");
}

constexpr std::size_t kDirectConvolutionLimit = 4096;

/// Neumaier-compensated sum; plain summation drifts past 1e-12 at large orders.
double mass_sum(std::span<const double> w) {
  double s = 0.0, comp = 0.0;
  for (double x : w) {
    const double t = s + x;
    comp += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  return s + comp;
}

/// Clamps round-off negatives; rejects anything below -tol.
void clamp_weights(std::vector<double>& w, double tol, const char* what) {
  for (double& x : w) {
    if (!(x >= -tol)) throw std::invalid_argument(std::string(what) + ": negative weight " + std::to_string(x));
    if (x < 0.0) x = 0.0;
  }
}

/// K = {b : v_p(b) >= t}; T^*(K) + S^*(K) = {v_p >= min(N, t + min(j1, j2))}.
SubgroupReport subgroup_report(const Quotient& q, unsigned t, Scaling ts, Scaling ss) {
  const unsigned n = q.exponent();
  const unsigned shift = std::min(ts.power, ss.power);
  SubgroupReport rep;
  rep.generator_valuation = t;
  rep.order = q.pow(n - t);
  rep.generator = t == n ? 0 : q.pow(t);
  rep.full = t == n;
  rep.invariant_under_pair = std::min(n, t + shift) == t;
  rep.steps_to_trivial = shift == 0 ? 0 : (n - t + shift - 1) / shift;
  return rep;
}

}  // namespace

// ---------------------------------------------------------------------------

Quotient::Quotient(unsigned p, unsigned m, unsigned k) : p_(p), m_(m), k_(k), order_(1) {
  if (!is_prime(p)) throw std::invalid_argument("Quotient: p = " + std::to_string(p) + " is not prime");
  if (k < 1) throw std::invalid_argument("Quotient: k must be >= 1");
  for (unsigned i = 0; i < m + k; ++i) {
    if (order_ > (std::uint64_t{1} << 62) / p) throw std::invalid_argument("Quotient: p^(m+k) overflows 2^62");
    order_ *= p;
  }
}

std::uint64_t Quotient::pow(unsigned e) const {
  if (e > exponent()) throw std::invalid_argument("Quotient::pow: exponent above m + k");
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) r *= p_;
  return r;
}

unsigned Quotient::residue_valuation(std::uint64_t a) const {
  a %= order_;
  if (a == 0) return exponent();
  unsigned v = 0;
  while (a % p_ == 0) {
    a /= p_;
    ++v;
  }
  return v;
}

double Quotient::norm(std::uint64_t a) const {
  const unsigned v = residue_valuation(a);
  if (v == exponent()) return 0.0;
  return std::pow(static_cast<double>(p_), static_cast<double>(m_) - static_cast<double>(v));
}

double Quotient::dual_norm(std::uint64_t b) const {
  const unsigned v = residue_valuation(b);
  if (v == exponent()) return 0.0;
  return std::pow(static_cast<double>(p_), static_cast<double>(k_) - static_cast<double>(v));
}

std::uint64_t Quotient::element_of_power(int j) const {
  if (j < -static_cast<int>(m_) || j >= static_cast<int>(k_))
    throw std::invalid_argument("element_of_power: p^" + std::to_string(j) + " not representable");
  return pow(static_cast<unsigned>(j + static_cast<int>(m_)));
}

double padic_norm(const Quotient& q, std::uint64_t a) { return q.norm(a); }

double autophage_exponent(unsigned p) {
  if (!is_prime(p)) throw std::invalid_argument("autophage_exponent: p is not prime");
  return std::log(2.0) / std::log(static_cast<double>(p));
}

void check_dense_order(const Quotient& q, std::uint64_t cap) {
  if (q.order() > cap)
    throw std::length_error("dense quotient of order " + std::to_string(q.order()) + " exceeds the cap " +
                            std::to_string(cap));
}

// ---------------------------------------------------------------------------

QuotientMeasure::QuotientMeasure(Quotient q, std::vector<double> weights) : q_(q), weights_(std::move(weights)) {
  check_dense_order(q_);
  if (weights_.size() != q_.order()) throw std::invalid_argument("QuotientMeasure: need one weight per element");
  clamp_weights(weights_, 1e-12, "QuotientMeasure");
  if (std::abs(total_mass() - 1.0) > 1e-12) throw std::invalid_argument("QuotientMeasure: weights must sum to 1");
}

QuotientMeasure QuotientMeasure::dirac(const Quotient& q, std::uint64_t a) {
  check_dense_order(q);
  std::vector<double> w(q.order(), 0.0);
  w[a % q.order()] = 1.0;
  return {q, std::move(w)};
}

QuotientMeasure QuotientMeasure::haar_ball(const Quotient& q, int j) {
  check_dense_order(q);
  if (j < -static_cast<int>(q.m()) || j > static_cast<int>(q.k()))
    throw std::invalid_argument("haar_ball: j outside [-m, k]");
  const std::uint64_t step = q.pow(static_cast<unsigned>(j + static_cast<int>(q.m())));
  const std::uint64_t size = q.order() / step;
  std::vector<double> w(q.order(), 0.0);
  for (std::uint64_t a = 0; a < q.order(); a += step) w[a] = 1.0 / static_cast<double>(size);
  return {q, std::move(w)};
}

double QuotientMeasure::total_mass() const {
  return mass_sum(weights_);
}

double QuotientMeasure::max_support_norm(double threshold) const {
  double r = 0.0;
  for (std::uint64_t a = 0; a < weights_.size(); ++a)
    if (weights_[a] > threshold) r = std::max(r, q_.norm(a));
  return r;
}

QuotientMeasure convolve(const QuotientMeasure& mu, const QuotientMeasure& nu) {
  require_same(mu.quotient(), nu.quotient(), "convolve");
  const std::size_t n = mu.quotient().order();
  const auto a = mu.weights(), b = nu.weights();
  std::vector<double> out(n, 0.0);

  if (n <= kDirectConvolutionLimit) {
    for (std::size_t i = 0; i < n; ++i) {
      if (a[i] == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t s = i + j < n ? i + j : i + j - n;
        out[s] += a[i] * b[j];
      }
    }
    return {mu.quotient(), std::move(out)};
  }

  std::vector<fft::Complex> fa(a.begin(), a.end()), fb(b.begin(), b.end());
  fa = fft::transform(fa, fft::Sign::positive);
  fb = fft::transform(fb, fft::Sign::positive);
  for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
  fa = fft::transform(fa, fft::Sign::negative);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::max(0.0, fa[i].real() / static_cast<double>(n));
  const double total = mass_sum(out);
  for (double& x : out) x /= total;
  return {mu.quotient(), std::move(out)};
}

QuotientMeasure apply_scaling(const QuotientMeasure& mu, Scaling scaling) {
  const Quotient& q = mu.quotient();
  check_scaling(q, scaling);
  const std::uint64_t n = q.order();
  const std::uint64_t factor = mul_mod(q.pow(scaling.power), scaling.unit % n, n);
  const auto w = mu.weights();
  std::vector<double> out(n, 0.0);
  for (std::uint64_t a = 0; a < n; ++a)
    if (w[a] != 0.0) out[mul_mod(a, factor, n)] += w[a];
  return {q, std::move(out)};
}

std::vector<std::complex<double>> transform(const QuotientMeasure& mu) {
  const auto w = mu.weights();
  std::vector<fft::Complex> data(w.begin(), w.end());
  return fft::transform(data, fft::Sign::positive);
}

double total_variation(const QuotientMeasure& mu, const QuotientMeasure& nu) {
  require_same(mu.quotient(), nu.quotient(), "total_variation");
  const auto a = mu.weights(), b = nu.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

QuotientMeasure padic_stable(const Quotient& q, double r, double c) {
  if (!(r > 0.0) || !(c > 0.0)) throw std::invalid_argument("padic_stable: r and c must be positive");
  check_dense_order(q);
  const std::uint64_t n = q.order();
  std::vector<fft::Complex> psi(n);
  for (std::uint64_t b = 0; b < n; ++b) {
    const double w = q.dual_norm(b);
    psi[b] = b == 0 ? 1.0 : std::exp(-c * std::pow(w, r));
  }
  const auto inv = fft::transform(psi, fft::Sign::negative);
  std::vector<double> weights(n);
  for (std::uint64_t a = 0; a < n; ++a) {
    const double x = inv[a].real() / static_cast<double>(n);
    if (x < -1e-9)
      throw PrecisionError("padic_stable: weight " + std::to_string(x) + " below -1e-9; increase m or k");
    weights[a] = std::max(0.0, x);
  }
  const double total = mass_sum(weights);
  for (double& x : weights) x /= total;
  return {q, std::move(weights)};
}

double autophage_residual_padic(const QuotientMeasure& mu, Scaling t, Scaling s) {
  return total_variation(mu, convolve(apply_scaling(mu, t), apply_scaling(mu, s)));
}

SubgroupReport unit_modulus_subgroup(const QuotientMeasure& mu, Scaling t, Scaling s, double tol) {
  const Quotient& q = mu.quotient();
  const auto psi = transform(mu);
  unsigned min_val = q.exponent();
  std::uint64_t members = 0;
  for (std::uint64_t b = 0; b < psi.size(); ++b) {
    if (std::abs(psi[b]) >= 1.0 - tol) {
      ++members;
      min_val = std::min(min_val, q.residue_valuation(b));
    }
  }
  // Every member lies in <p^min_val>; equality of orders closes K.
  if (members != q.pow(q.exponent() - min_val))
    throw Error("unit_modulus_subgroup: unit-modulus set of size " + std::to_string(members) +
                " is not a subgroup");
  return subgroup_report(q, min_val, t, s);
}

// ---------------------------------------------------------------------------

RadialMeasure::RadialMeasure(Quotient q, std::vector<double> coefficients) : q_(q), coef_(std::move(coefficients)) {
  if (coef_.size() != q_.exponent() + 1) throw std::invalid_argument("RadialMeasure: need m + k + 1 coefficients");
  const double total = mass_sum(coef_);
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("RadialMeasure: coefficients must sum to 1");
  for (double m : shell_masses())
    if (m < -1e-12) throw std::invalid_argument("RadialMeasure: negative shell mass");
}

RadialMeasure RadialMeasure::dirac_zero(const Quotient& q) {
  std::vector<double> c(q.exponent() + 1, 0.0);
  c.back() = 1.0;
  return {q, std::move(c)};
}

RadialMeasure RadialMeasure::haar_ball(const Quotient& q, int j) {
  if (j < -static_cast<int>(q.m()) || j > static_cast<int>(q.k()))
    throw std::invalid_argument("haar_ball: j outside [-m, k]");
  std::vector<double> c(q.exponent() + 1, 0.0);
  c[static_cast<std::size_t>(j + static_cast<int>(q.m()))] = 1.0;
  return {q, std::move(c)};
}

RadialMeasure RadialMeasure::stable(const Quotient& q, double r, double c) {
  if (!(r > 0.0) || !(c > 0.0)) throw std::invalid_argument("padic_stable: r and c must be positive");
  const unsigned n = q.exponent();
  const double p = q.p();
  // psi_j: transform on dual residues of valuation j (|w| = p^{k-j}).
  std::vector<double> psi(n + 1);
  for (unsigned j = 0; j < n; ++j) psi[j] = std::exp(-c * std::pow(p, (static_cast<double>(q.k()) - j) * r));
  psi[n] = 1.0;
  std::vector<double> coef(n + 1);
  coef[n] = psi[0];
  for (unsigned j = 1; j <= n; ++j) coef[n - j] = psi[j] - psi[j - 1];
  return {q, std::move(coef)};
}

std::vector<double> RadialMeasure::shell_masses() const {
  const unsigned n = q_.exponent();
  const double p = q_.p();
  std::vector<double> mass(n + 1, 0.0);
  for (unsigned j = 0; j <= n; ++j) {
    for (unsigned i = 0; i <= j; ++i) {
      const double frac = j < n ? (p - 1.0) * std::pow(p, static_cast<double>(i) - 1.0 - j)
                                : std::pow(p, static_cast<double>(i) - n);
      mass[j] += coef_[i] * frac;
    }
  }
  return mass;
}

double RadialMeasure::transform_at_valuation(unsigned j) const {
  const unsigned n = q_.exponent();
  if (j > n) throw std::invalid_argument("transform_at_valuation: j above m + k");
  double s = 0.0;
  for (unsigned i = n - j; i <= n; ++i) s += coef_[i];
  return s;
}

QuotientMeasure RadialMeasure::to_dense(std::uint64_t cap) const {
  check_dense_order(q_, cap);
  const unsigned n = q_.exponent();
  const auto mass = shell_masses();
  std::vector<double> per_element(n + 1);
  for (unsigned j = 0; j <= n; ++j) {
    const double count = j < n ? (q_.p() - 1.0) * std::pow(static_cast<double>(q_.p()), n - 1.0 - j) : 1.0;
    per_element[j] = std::max(0.0, mass[j]) / count;
  }
  std::vector<double> w(q_.order());
  for (std::uint64_t a = 0; a < w.size(); ++a) w[a] = per_element[q_.residue_valuation(a)];
  return {q_, std::move(w)};
}

RadialMeasure convolve(const RadialMeasure& mu, const RadialMeasure& nu) {
  require_same(mu.quotient(), nu.quotient(), "convolve");
  // Haar(B_i) * Haar(B_j) = Haar(B_min(i,j)).
  const auto a = mu.coefficients(), b = nu.coefficients();
  const std::size_t n = a.size();
  std::vector<double> tail_a(n + 1, 0.0), tail_b(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    tail_a[i] = tail_a[i + 1] + a[i];
    tail_b[i] = tail_b[i + 1] + b[i];
  }
  std::vector<double> out(n);
  for (std::size_t l = 0; l < n; ++l) out[l] = a[l] * tail_b[l] + b[l] * tail_a[l + 1];
  return {mu.quotient(), std::move(out)};
}

RadialMeasure apply_scaling(const RadialMeasure& mu, Scaling scaling) {
  const Quotient& q = mu.quotient();
  check_scaling(q, scaling);
  const auto a = mu.coefficients();
  const std::size_t n = q.exponent();
  std::vector<double> out(n + 1, 0.0);
  for (std::size_t i = 0; i <= n; ++i) out[std::min(n, i + scaling.power)] += a[i];
  return {q, std::move(out)};
}

double total_variation(const RadialMeasure& mu, const RadialMeasure& nu) {
  require_same(mu.quotient(), nu.quotient(), "total_variation");
  const auto a = mu.shell_masses(), b = nu.shell_masses();
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += std::abs(a[j] - b[j]);
  return 0.5 * s;
}

double autophage_residual_padic(const RadialMeasure& mu, Scaling t, Scaling s) {
  return total_variation(mu, convolve(apply_scaling(mu, t), apply_scaling(mu, s)));
}

SubgroupReport unit_modulus_subgroup(const RadialMeasure& mu, Scaling t, Scaling s, double tol) {
  const Quotient& q = mu.quotient();
  const unsigned n = q.exponent();
  unsigned min_val = n;
  for (unsigned j = n + 1; j-- > 0;) {
    if (std::abs(mu.transform_at_valuation(j)) >= 1.0 - tol) {
      if (min_val != j + 1 && j != n)
        throw Error("unit_modulus_subgroup: unit-modulus set is not a subgroup");
      min_val = j;
    }
  }
  return subgroup_report(q, min_val, t, s);
}

}  // namespace autophage::padic
