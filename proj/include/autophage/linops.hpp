#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace autophage {

using Vector = std::vector<double>;

/// Dense d×d real matrix acting on R^d. Row-major storage.
class LinearMap {
 public:
  LinearMap() = default;
  explicit LinearMap(std::size_t dim);  // zero map
  LinearMap(std::size_t dim, std::vector<double> row_major);
  LinearMap(std::initializer_list<std::initializer_list<double>> rows);

  static LinearMap identity(std::size_t dim);
  static LinearMap scalar(std::size_t dim, double value);
  static LinearMap diagonal(std::span<const double> diag);
  static LinearMap diagonal(std::initializer_list<double> diag);

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  std::span<const double> entries() const noexcept { return data_; }

  LinearMap adjoint() const;
  Vector apply(std::span<const double> x) const;
  bool is_finite() const noexcept;
  bool is_symmetric(double tol) const;
  double frobenius_norm() const noexcept;
  double max_abs() const noexcept;

  LinearMap& operator+=(const LinearMap& other);
  LinearMap& operator-=(const LinearMap& other);
  LinearMap& operator*=(double s) noexcept;

  friend LinearMap operator*(const LinearMap& a, const LinearMap& b);
  friend LinearMap operator+(LinearMap a, const LinearMap& b) { return a += b; }
  friend LinearMap operator-(LinearMap a, const LinearMap& b) { return a -= b; }
  friend LinearMap operator*(double s, LinearMap a) { return a *= s; }
  friend bool operator==(const LinearMap& a, const LinearMap& b) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

LinearMap power(const LinearMap& a, unsigned k);
LinearMap commutator(const LinearMap& a, const LinearMap& b);

/// Largest singular value, max over unit x of |Ax|.
double operator_norm(const LinearMap& a);

/// Spectral radius (largest eigenvalue modulus).
double spectral_radius(const LinearMap& a);

/// Smallest singular value. Returns 0 for singular maps.
double smallest_singular_value(const LinearMap& a);

/// Inverse by partial-pivot Gaussian elimination. Throws std::domain_error
/// when the map is numerically singular.
LinearMap inverse(const LinearMap& a);

struct SymmetricEigen {
  Vector values;                      // ascending
  std::vector<Vector> vectors;        // vectors[i] pairs with values[i]
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
SymmetricEigen symmetric_eigen(const LinearMap& a);

/// Same algorithm on a raw n×n symmetric array (row-major), for callers that
/// work in spaces larger than R^d (e.g. the symmetric-matrix space).
SymmetricEigen symmetric_eigen(std::size_t n, std::vector<double> a);

/// Principal square root of a symmetric positive-semidefinite map.
LinearMap symmetric_sqrt(const LinearMap& a);

// ---------------------------------------------------------------------------
// Contraction systems

enum class ContractionKind { strict, eventual, none };

std::string to_string(ContractionKind kind);

/// Scale-aware absolute tolerance for TS = ST.
double commutation_tolerance(const LinearMap& t, const LinearMap& s);

struct SystemReport {
  std::vector<ContractionKind> kinds;
  std::vector<double> norms;
  std::vector<double> spectral_radii;
  std::vector<bool> invertible;
  /// commutator_norms[i][j] = |T_i T_j - T_j T_i|
  std::vector<std::vector<double>> commutator_norms;
};

/// Classifies each map and checks pairwise commutation. Throws
/// NonCommutingError naming the first offending pair.
SystemReport validate_system(std::span<const LinearMap> maps);

/// A validated family of commuting contractions, each invertible.
class ContractionSystem {
 public:
  explicit ContractionSystem(std::vector<LinearMap> maps);

  std::span<const LinearMap> maps() const noexcept { return maps_; }
  const SystemReport& report() const noexcept { return report_; }
  std::size_t dim() const noexcept { return maps_.front().dim(); }

 private:
  std::vector<LinearMap> maps_;
  SystemReport report_;
};

/// Smallest k <= cap with |T^k| < 1.
unsigned power_until_strict(const LinearMap& t, unsigned cap = 1000);

// ---------------------------------------------------------------------------
// Words in the semigroup generated by (T, S)

enum class Letter : std::uint8_t { first, second };

struct OperatorWord {
  std::vector<Letter> letters;
  LinearMap product;
  /// |T|^{#first} |S|^{#second}
  double norm_bound = 1.0;

  std::size_t length() const noexcept { return letters.size(); }
  std::size_t count(Letter l) const noexcept;
};

inline constexpr unsigned kDefaultWordDepthCap = 24;
inline constexpr unsigned kMaterializeDepth = 16;

/// Streams all 2^n words of length n (products composed left to right) in
/// lexicographic order, first < second.
void for_each_word(const LinearMap& t, const LinearMap& s, unsigned n,
                   const std::function<void(const OperatorWord&)>& visit,
                   unsigned cap = kDefaultWordDepthCap);

std::vector<OperatorWord> enumerate_words(const LinearMap& t, const LinearMap& s, unsigned n,
                                          unsigned cap = kDefaultWordDepthCap);

/// max over words of length n of |alpha|.
double max_word_norm(const LinearMap& t, const LinearMap& s, unsigned n,
                     unsigned cap = kDefaultWordDepthCap);

}  // namespace autophage
