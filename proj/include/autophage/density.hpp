#pragma once

// Fourier inversion of an integrable characteristic function to a bounded
// continuous density on a regular lattice.
//
//   f(x) = (2 pi)^{-d} int phi(v) exp(-i <v, x>) dv
//
// The frequency lattice is GridSpec (half-width L, N points per axis). The
// output lattice has spacing pi / L and N points per axis centred on 0.

#include "autophage/charfn.hpp"
#include "autophage/decay.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace autophage {

struct InversionOptions {
  /// Frequency sampling is refined by this factor to push periodization
  /// error out of the reported window. Reduced automatically in d > 1.
  std::size_t oversample = 8;
  std::size_t max_total_points = std::size_t{1} << 22;
  /// Largest |phi| tolerated on the boundary of the frequency lattice.
  double boundary_tolerance = 1e-6;
  /// Density values below -ringing_tolerance fail the inversion.
  double ringing_tolerance = 1e-6;
};

struct GridDensity {
  GridSpec frequency_grid;
  std::size_t dim = 1;
  std::size_t points = 0;   // per axis
  double spacing = 0.0;     // x-spacing h
  double origin = 0.0;      // x_0 = origin on every axis
  std::size_t oversample = 1;
  std::vector<double> values;  // row-major, points^dim
  double sup_value = 0.0;
  double min_value = 0.0;
  double total_mass = 0.0;
  double max_imaginary = 0.0;
  double boundary_modulus = 0.0;

  double coordinate(std::size_t j) const { return origin + spacing * static_cast<double>(j); }
  double cell_volume() const;
  /// Index of the lattice point x = 0 on each axis.
  std::size_t centre_index() const { return points / 2; }
  double value_at_origin() const;
};

/// Throws AliasingError when |phi| on the lattice boundary exceeds the
/// boundary tolerance, VerificationError on negative ringing.
GridDensity invert_to_density(const CharFnModel& model, const GridSpec& grid, const InversionOptions& options = {});

struct DensityDiagnostics {
  double mass = 0.0;              // midpoint rule
  double min_value = 0.0;
  double sup_value = 0.0;
  double continuity_modulus = 0.0;  // largest jump between adjacent cells
  bool valid = false;             // finite, nonzero, no ringing below -1e-6
};

DensityDiagnostics density_diagnostics(const GridDensity& gd);

/// Draws points by rejection from the linearly interpolated density within
/// the lattice window.
std::vector<Vector> rejection_sample(const GridDensity& gd, std::size_t count, std::uint64_t seed);

// ---------------------------------------------------------------------------
// decay -> density pipeline

struct CertifyOptions {
  std::size_t points = 4096;       // frequency lattice points per axis (d = 1)
  double boundary_target = 1e-9;   // choose L with exp(-c L^r) below this
  std::size_t rays = 64;
  std::size_t radii = 64;
  double max_radius = 20.0;
  AnnulusSampling sampling{};
  InversionOptions inversion{};
};

struct DensityCertificate {
  DecayProfile profile;
  BoundReport bound;
  double integrability = 0.0;  // bound on int |phi|
  double lipschitz = 0.0;      // (2 pi)^{-d} int |v| |phi(v)| bound
  GridDensity density;
  DensityDiagnostics diagnostics;

  bool bound_holds = false;
  bool bounded = false;        // sup <= integrability / (2 pi)^d + 1e-6
  bool continuous = false;     // adjacent jumps <= h * lipschitz + 1e-6
  bool nonnegative = false;    // min >= -1e-6

  bool certified() const { return bound_holds && bounded && continuous && nonnegative && diagnostics.valid; }
};

/// Runs decay profile, tail-bound check, integrability bound and inversion for
/// mu = T_1(mu) * ... * T_m(mu), then checks the inverted density against the
/// bounds implied by the profile.
DensityCertificate certify_density(const CharFnModel& model, std::span<const LinearMap> maps,
                                   const CertifyOptions& options = {});

}  // namespace autophage
