#include "autophage/error.hpp"

#include <sstream>

namespace autophage {

namespace {

std::string non_commuting_message(std::size_t first, std::size_t second, double norm) {
  std::ostringstream os;
  os << "maps " << first << " and " << second << " do not commute (|[T_i,T_j]| = " << norm << ")";
  return os.str();
}

std::string aliasing_message(double modulus) {
  std::ostringstream os;
  os << "characteristic function not negligible at the grid boundary (|phi| = " << modulus
     << "); widen the frequency half-width";
  return os.str();
}

}  // namespace

NonCommutingError::NonCommutingError(std::size_t first, std::size_t second, double commutator_norm)
    : Error(non_commuting_message(first, second, commutator_norm)),
      first_(first),
      second_(second),
      commutator_norm_(commutator_norm) {}

AliasingError::AliasingError(double boundary_modulus)
    : Error(aliasing_message(boundary_modulus)), boundary_modulus_(boundary_modulus) {}

}  // namespace autophage
