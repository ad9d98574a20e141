#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace autophage {

/// Base class for all library errors. Precondition violations on plain
/// arguments use std::invalid_argument / std::domain_error instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonCommutingError : public Error {
 public:
  NonCommutingError(std::size_t first, std::size_t second, double commutator_norm);

  std::size_t first() const noexcept { return first_; }
  std::size_t second() const noexcept { return second_; }
  double commutator_norm() const noexcept { return commutator_norm_; }

 private:
  std::size_t first_;
  std::size_t second_;
  double commutator_norm_;
};

/// Raised when a characteristic function is not negligible at the edge of
/// the frequency lattice used for inversion.
class AliasingError : public Error {
 public:
  explicit AliasingError(double boundary_modulus);
  double boundary_modulus() const noexcept { return boundary_modulus_; }

 private:
  double boundary_modulus_;
};

/// Finite-precision p-adic model cannot represent the requested operation.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// A numerical certificate failed (negative ringing, non-integrable model...).
class VerificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace autophage
