#include "autophage/linops.hpp"

#include "autophage/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace autophage {

LinearMap::LinearMap(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {
  if (dim == 0) throw std::invalid_argument("LinearMap: dim must be >= 1");
}

LinearMap::LinearMap(std::size_t dim, std::vector<double> row_major)
    : dim_(dim), data_(std::move(row_major)) {
  if (dim == 0) throw std::invalid_argument("LinearMap: dim must be >= 1");
  if (data_.size() != dim * dim) throw std::invalid_argument("LinearMap: expected dim*dim entries");
  if (!is_finite()) throw std::invalid_argument("LinearMap: non-finite entry");
}

LinearMap::LinearMap(std::initializer_list<std::initializer_list<double>> rows) : dim_(rows.size()) {
  if (dim_ == 0) throw std::invalid_argument("LinearMap: dim must be >= 1");
  data_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    if (row.size() != dim_) throw std::invalid_argument("LinearMap: matrix must be square");
    data_.insert(data_.end(), row.begin(), row.end());
  }
  if (!is_finite()) throw std::invalid_argument("LinearMap: non-finite entry");
}

LinearMap LinearMap::identity(std::size_t dim) { return scalar(dim, 1.0); }

LinearMap LinearMap::scalar(std::size_t dim, double value) {
  LinearMap m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = value;
  return m;
}

LinearMap LinearMap::diagonal(std::span<const double> diag) {
  LinearMap m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

LinearMap LinearMap::diagonal(std::initializer_list<double> diag) {
  return diagonal(std::span<const double>(diag.begin(), diag.size()));
}

LinearMap LinearMap::adjoint() const {
  LinearMap out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

Vector LinearMap::apply(std::span<const double> x) const {
  if (x.size() != dim_) throw std::invalid_argument("LinearMap::apply: dimension mismatch");
  Vector y(dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) acc += data_[i * dim_ + j] * x[j];
    y[i] = acc;
  }
  return y;
}

bool LinearMap::is_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

bool LinearMap::is_symmetric(double tol) const {
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i + 1; j < dim_; ++j)
      if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
  return true;
}

double LinearMap::frobenius_norm() const noexcept {
  double acc = 0.0;
  for (double v : data_) acc += v * v;
  return std::sqrt(acc);
}

double LinearMap::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

LinearMap& LinearMap::operator+=(const LinearMap& other) {
  if (other.dim_ != dim_) throw std::invalid_argument("LinearMap: dimension mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

LinearMap& LinearMap::operator-=(const LinearMap& other) {
  if (other.dim_ != dim_) throw std::invalid_argument("LinearMap: dimension mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

LinearMap& LinearMap::operator*=(double s) noexcept {
  for (double& v : data_) v *= s;
  return *this;
}

LinearMap operator*(const LinearMap& a, const LinearMap& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("LinearMap: dimension mismatch");
  const std::size_t d = a.dim_;
  LinearMap c(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      const double aik = a.data_[i * d + k];
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < d; ++j) c.data_[i * d + j] += aik * b.data_[k * d + j];
    }
  return c;
}

LinearMap power(const LinearMap& a, unsigned k) {
  LinearMap result = LinearMap::identity(a.dim());
  LinearMap base = a;
  while (k > 0) {
    if (k & 1u) result = result * base;
    k >>= 1u;
    if (k > 0) base = base * base;
  }
  return result;
}

LinearMap commutator(const LinearMap& a, const LinearMap& b) { return a * b - b * a; }

// ---------------------------------------------------------------------------

SymmetricEigen symmetric_eigen(std::size_t n, std::vector<double> a) {
  if (a.size() != n * n) throw std::invalid_argument("symmetric_eigen: size mismatch");
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  auto at = [n](std::vector<double>& m, std::size_t i, std::size_t j) -> double& { return m[i * n + j]; };

  constexpr int kMaxSweeps = 10000;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0, diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      diag += at(a, i, i) * at(a, i, i);
      for (std::size_t j = i + 1; j < n; ++j) off += at(a, i, j) * at(a, i, j);
    }
    if (off <= 1e-30 * std::max(diag, 1e-300) || off == 0.0) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(a, p, q);
        if (apq == 0.0) continue;
        const double app = at(a, p, p), aqq = at(a, q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(a, k, p), akq = at(a, k, q);
          at(a, k, p) = c * akp - s * akq;
          at(a, k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(a, p, k), aqk = at(a, q, k);
          at(a, p, k) = c * apk - s * aqk;
          at(a, q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = at(v, k, p), vkq = at(v, k, q);
          at(v, k, p) = c * vkp - s * vkq;
          at(v, k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return at(a, i, i) < at(a, j, j); });

  SymmetricEigen out;
  out.values.reserve(n);
  out.vectors.reserve(n);
  for (std::size_t idx : order) {
    out.values.push_back(at(a, idx, idx));
    Vector col(n);
    for (std::size_t k = 0; k < n; ++k) col[k] = at(v, k, idx);
    out.vectors.push_back(std::move(col));
  }
  return out;
}

SymmetricEigen symmetric_eigen(const LinearMap& a) {
  if (!a.is_symmetric(1e-12 * (1.0 + a.max_abs())))
    throw std::invalid_argument("symmetric_eigen: matrix is not symmetric");
  // Symmetrize exactly so round-off asymmetry does not leak into the rotations.
  const std::size_t d = a.dim();
  std::vector<double> m(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m[i * d + j] = 0.5 * (a(i, j) + a(j, i));
  return symmetric_eigen(d, std::move(m));
}

double operator_norm(const LinearMap& a) {
  if (!a.is_finite()) throw std::invalid_argument("operator_norm: non-finite entries");
  const LinearMap gram = a.adjoint() * a;
  const auto eig = symmetric_eigen(gram);
  return std::sqrt(std::max(0.0, eig.values.back()));
}

double smallest_singular_value(const LinearMap& a) {
  const LinearMap gram = a.adjoint() * a;
  const auto eig = symmetric_eigen(gram);
  return std::sqrt(std::max(0.0, eig.values.front()));
}

double spectral_radius(const LinearMap& a) {
  const auto d = static_cast<Eigen::Index>(a.dim());
  Eigen::MatrixXd m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw Error("spectral_radius: eigenvalue iteration failed");
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

LinearMap inverse(const LinearMap& a) {
  const std::size_t d = a.dim();
  std::vector<double> m(a.entries().begin(), a.entries().end());
  LinearMap inv = LinearMap::identity(d);
  const double scale = std::max(a.max_abs(), 1e-300);
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < d; ++r)
      if (std::abs(m[r * d + col]) > std::abs(m[pivot * d + col])) pivot = r;
    if (std::abs(m[pivot * d + col]) <= 1e-14 * scale) throw std::domain_error("inverse: map is singular");
    if (pivot != col) {
      for (std::size_t j = 0; j < d; ++j) {
        std::swap(m[pivot * d + j], m[col * d + j]);
        std::swap(inv(pivot, j), inv(col, j));
      }
    }
    const double p = m[col * d + col];
    for (std::size_t j = 0; j < d; ++j) {
      m[col * d + j] /= p;
      inv(col, j) /= p;
    }
    for (std::size_t r = 0; r < d; ++r) {
      if (r == col) continue;
      const double f = m[r * d + col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < d; ++j) {
        m[r * d + j] -= f * m[col * d + j];
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

LinearMap symmetric_sqrt(const LinearMap& a) {
  const auto eig = symmetric_eigen(a);
  const double tol = 1e-12 * std::max(1.0, std::abs(eig.values.back()));
  const std::size_t d = a.dim();
  LinearMap root(d);
  for (std::size_t k = 0; k < d; ++k) {
    double lambda = eig.values[k];
    if (lambda < -tol) throw std::domain_error("symmetric_sqrt: matrix is not positive semidefinite");
    const double r = std::sqrt(std::max(0.0, lambda));
    const auto& u = eig.vectors[k];
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) root(i, j) += r * u[i] * u[j];
  }
  return root;
}

// ---------------------------------------------------------------------------

std::string to_string(ContractionKind kind) {
  switch (kind) {
    case ContractionKind::strict: return "strict";
    case ContractionKind::eventual: return "eventual";
    case ContractionKind::none: return "none";
  }
  return "none";
}

double commutation_tolerance(const LinearMap& t, const LinearMap& s) {
  return 1e-12 * (1.0 + operator_norm(t) * operator_norm(s));
}

SystemReport validate_system(std::span<const LinearMap> maps) {
  if (maps.empty()) throw std::invalid_argument("validate_system: empty family");
  const std::size_t d = maps.front().dim();
  for (const auto& m : maps)
    if (m.dim() != d) throw std::invalid_argument("validate_system: maps must share one dimension");

  SystemReport report;
  const std::size_t n = maps.size();
  for (const auto& m : maps) {
    const double norm = operator_norm(m);
    const double rho = spectral_radius(m);
    report.norms.push_back(norm);
    report.spectral_radii.push_back(rho);
    report.invertible.push_back(smallest_singular_value(m) > 1e-12 * std::max(norm, 1e-300));
    if (norm < 1.0)
      report.kinds.push_back(ContractionKind::strict);
    else if (rho < 1.0)
      report.kinds.push_back(ContractionKind::eventual);
    else
      report.kinds.push_back(ContractionKind::none);
  }

  report.commutator_norms.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double c = operator_norm(commutator(maps[i], maps[j]));
      report.commutator_norms[i][j] = report.commutator_norms[j][i] = c;
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (report.commutator_norms[i][j] > 1e-12 * (1.0 + report.norms[i] * report.norms[j]))
        throw NonCommutingError(i, j, report.commutator_norms[i][j]);
  return report;
}

ContractionSystem::ContractionSystem(std::vector<LinearMap> maps) : maps_(std::move(maps)) {
  report_ = validate_system(maps_);
  for (std::size_t i = 0; i < maps_.size(); ++i) {
    if (!report_.invertible[i]) throw std::invalid_argument("ContractionSystem: map " + std::to_string(i) + " is not invertible");
    if (report_.kinds[i] == ContractionKind::none)
      throw std::invalid_argument("ContractionSystem: map " + std::to_string(i) + " is not a contraction");
  }
}

unsigned power_until_strict(const LinearMap& t, unsigned cap) {
  LinearMap p = t;
  for (unsigned k = 1; k <= cap; ++k) {
    if (operator_norm(p) < 1.0) return k;
    p = p * t;
  }
  throw Error("power_until_strict: no k <= " + std::to_string(cap) + " with |T^k| < 1");
}

// ---------------------------------------------------------------------------

std::size_t OperatorWord::count(Letter l) const noexcept {
  return static_cast<std::size_t>(std::count(letters.begin(), letters.end(), l));
}

void for_each_word(const LinearMap& t, const LinearMap& s, unsigned n,
                   const std::function<void(const OperatorWord&)>& visit, unsigned cap) {
  if (t.dim() != s.dim()) throw std::invalid_argument("for_each_word: dimension mismatch");
  if (n > cap) throw std::length_error("word depth " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  const double nt = operator_norm(t), ns = operator_norm(s);

  // prefix[k] holds the product of the first k letters.
  std::vector<LinearMap> prefix(n + 1, LinearMap::identity(t.dim()));
  OperatorWord word;
  word.letters.assign(n, Letter::first);

  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t code = 0; code < total; ++code) {
    // Recompute only the suffix that changed since the previous code.
    unsigned first_changed = 0;
    if (code > 0) {
      const std::uint64_t diff = code ^ (code - 1);
      unsigned bits = 0;
      for (std::uint64_t d = diff; d; d >>= 1u) ++bits;
      first_changed = n - bits;
    }
    std::size_t seconds = 0;
    for (unsigned k = 0; k < n; ++k) {
      const bool is_second = (code >> (n - 1 - k)) & 1u;
      word.letters[k] = is_second ? Letter::second : Letter::first;
      if (is_second) ++seconds;
      if (k >= first_changed) prefix[k + 1] = prefix[k] * (is_second ? s : t);
    }
    word.product = prefix[n];
    word.norm_bound = std::pow(nt, static_cast<double>(n - seconds)) * std::pow(ns, static_cast<double>(seconds));
    visit(word);
  }
}

std::vector<OperatorWord> enumerate_words(const LinearMap& t, const LinearMap& s, unsigned n, unsigned cap) {
  if (n > cap) throw std::length_error("word depth " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  std::vector<OperatorWord> words;
  words.reserve(std::size_t{1} << n);
  for_each_word(t, s, n, [&](const OperatorWord& w) { words.push_back(w); }, cap);
  return words;
}

double max_word_norm(const LinearMap& t, const LinearMap& s, unsigned n, unsigned cap) {
  if (n > cap) throw std::length_error("word depth " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  if (operator_norm(commutator(t, s)) <= commutation_tolerance(t, s)) {
    // Commuting: every word of length n equals T^{n-i} S^i for its letter counts.
    double best = 0.0;
    for (unsigned i = 0; i <= n; ++i) best = std::max(best, operator_norm(power(t, n - i) * power(s, i)));
    return best;
  }
  double best = 0.0;
  for_each_word(t, s, n, [&](const OperatorWord& w) { best = std::max(best, operator_norm(w.product)); }, cap);
  return best;
}

}  // namespace autophage
