#include "autophage/density.hpp"

#include "autophage/error.hpp"
#include "autophage/fft.hpp"
#include "autophage/qmc.hpp"
#include "autophage/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace autophage {

namespace {

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

double GridDensity::cell_volume() const { return std::pow(spacing, static_cast<double>(dim)); }

double GridDensity::value_at_origin() const {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < dim; ++k) idx = idx * points + centre_index();
  return values.at(idx);
}

GridDensity invert_to_density(const CharFnModel& model, const GridSpec& grid, const InversionOptions& options) {
  grid.validate();
  if (grid.dim != model.dim()) throw std::invalid_argument("invert_to_density: dimension mismatch");
  if (grid.dim > 3) throw std::invalid_argument("invert_to_density: d > 3 is not supported");
  if (options.oversample == 0) throw std::invalid_argument("invert_to_density: oversample must be >= 1");

  const std::size_t d = grid.dim;
  const std::size_t n = grid.points;
  std::size_t over = options.oversample;
  while (over > 1 && ipow(n * over, d) > options.max_total_points) --over;
  const std::size_t m = n * over;
  if (ipow(m, d) > options.max_total_points) throw std::invalid_argument("invert_to_density: grid exceeds the memory budget");

  const double L = grid.half_width;
  const double dv = 2.0 * L / static_cast<double>(m);
  const std::size_t total = ipow(m, d);

  // Sample phi with the (-1)^k pre-twiddle and record the boundary modulus.
  std::vector<fft::Complex> data(total);
  std::vector<std::size_t> idx(d, 0);
  Vector v(d, -L);
  double boundary = 0.0;
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t parity = 0;
    bool on_boundary = false;
    for (std::size_t k = 0; k < d; ++k) {
      v[k] = -L + dv * static_cast<double>(idx[k]);
      parity += idx[k];
      on_boundary = on_boundary || idx[k] == 0 || idx[k] == m - 1;
    }
    const auto phi = model(v);
    if (on_boundary) boundary = std::max(boundary, std::abs(phi));
    data[flat] = (parity % 2 == 0) ? phi : -phi;
    for (std::size_t k = d; k-- > 0;) {
      if (++idx[k] < m) break;
      idx[k] = 0;
    }
  }
  if (!(boundary <= options.boundary_tolerance)) throw AliasingError(boundary);

  const std::vector<std::size_t> extents(d, m);
  fft::transform_nd(data, extents, fft::Sign::negative);

  GridDensity gd;
  gd.frequency_grid = grid;
  gd.dim = d;
  gd.points = n;
  gd.spacing = std::numbers::pi / L;
  gd.origin = -static_cast<double>(n / 2) * gd.spacing;
  gd.oversample = over;
  gd.boundary_modulus = boundary;

  // Post-twiddle per axis: (-1)^{m/2} (-1)^j; keep the central n of m outputs.
  const double norm = std::pow(dv / (2.0 * std::numbers::pi), static_cast<double>(d));
  const std::size_t offset = (m - n) / 2;
  gd.values.assign(ipow(n, d), 0.0);
  std::vector<std::size_t> out_idx(d, 0);
  for (std::size_t flat = 0; flat < gd.values.size(); ++flat) {
    std::size_t src = 0, parity = 0;
    for (std::size_t k = 0; k < d; ++k) {
      const std::size_t j = out_idx[k] + offset;
      src = src * m + j;
      parity += j + m / 2;
    }
    fft::Complex val = data[src] * norm;
    if (parity % 2 == 1) val = -val;
    gd.values[flat] = val.real();
    gd.max_imaginary = std::max(gd.max_imaginary, std::abs(val.imag()));
    for (std::size_t k = d; k-- > 0;) {
      if (++out_idx[k] < n) break;
      out_idx[k] = 0;
    }
  }

  gd.sup_value = *std::max_element(gd.values.begin(), gd.values.end());
  gd.min_value = *std::min_element(gd.values.begin(), gd.values.end());
  double mass = 0.0;
  for (double x : gd.values) mass += x;
  gd.total_mass = mass * gd.cell_volume();

  if (gd.min_value < -options.ringing_tolerance)
    throw VerificationError("invert_to_density: negative ringing " + std::to_string(gd.min_value) +
                            " below tolerance; refine the lattice");
  return gd;
}

DensityDiagnostics density_diagnostics(const GridDensity& gd) {
  DensityDiagnostics diag;
  if (gd.values.empty()) return diag;
  diag.min_value = *std::min_element(gd.values.begin(), gd.values.end());
  diag.sup_value = *std::max_element(gd.values.begin(), gd.values.end());
  double sum = 0.0;
  bool finite = true;
  for (double x : gd.values) {
    sum += x;
    finite = finite && std::isfinite(x);
  }
  diag.mass = sum * gd.cell_volume();

  const std::size_t n = gd.points;
  std::size_t stride = 1;
  for (std::size_t axis = 0; axis < gd.dim; ++axis) {
    for (std::size_t i = 0; i < gd.values.size(); ++i) {
      if ((i / stride) % n == n - 1) continue;
      diag.continuity_modulus = std::max(diag.continuity_modulus, std::abs(gd.values[i + stride] - gd.values[i]));
    }
    stride *= n;
  }
  diag.valid = finite && diag.mass > 0.0 && diag.sup_value > 0.0 && diag.min_value >= -1e-6;
  return diag;
}

std::vector<Vector> rejection_sample(const GridDensity& gd, std::size_t count, std::uint64_t seed) {
  if (gd.values.empty() || !(gd.sup_value > 0.0)) throw std::invalid_argument("rejection_sample: empty density");
  const std::size_t d = gd.dim, n = gd.points;
  const double width = gd.spacing * static_cast<double>(n - 1);
  CounterRng rng(seed);

  auto interpolate = [&](const Vector& x) {
    std::vector<std::size_t> base(d);
    Vector frac(d);
    for (std::size_t k = 0; k < d; ++k) {
      const double u = (x[k] - gd.origin) / gd.spacing;
      base[k] = std::min(static_cast<std::size_t>(u), n - 2);
      frac[k] = u - static_cast<double>(base[k]);
    }
    double acc = 0.0;
    for (std::size_t corner = 0; corner < (std::size_t{1} << d); ++corner) {
      double w = 1.0;
      std::size_t flat = 0;
      for (std::size_t k = 0; k < d; ++k) {
        const bool up = (corner >> k) & 1u;
        w *= up ? frac[k] : 1.0 - frac[k];
        flat = flat * n + base[k] + (up ? 1 : 0);
      }
      acc += w * gd.values[flat];
    }
    return acc;
  };

  std::vector<Vector> out;
  out.reserve(count);
  Vector x(d);
  while (out.size() < count) {
    for (std::size_t k = 0; k < d; ++k) x[k] = gd.origin + width * rng.uniform();
    if (rng.uniform() * gd.sup_value < interpolate(x)) out.push_back(x);
  }
  return out;
}

// ---------------------------------------------------------------------------

DensityCertificate certify_density(const CharFnModel& model, std::span<const LinearMap> maps,
                                   const CertifyOptions& options) {
  DensityCertificate cert;
  cert.profile = decay_profile(model, maps, options.sampling);
  const double r = cert.profile.r, c = cert.profile.c;

  const auto rays = qmc::sphere_directions(options.rays, model.dim());
  const auto radii = bound_radii(options.radii, options.max_radius);
  cert.bound = verify_bound(model, r, c, rays, radii);
  cert.bound_holds = cert.bound.violations.empty();

  const double two_pi_d = std::pow(2.0 * std::numbers::pi, static_cast<double>(model.dim()));
  cert.integrability = radial_bound_integral(r, c, model.dim(), 0);
  cert.lipschitz = radial_bound_integral(r, c, model.dim(), 1) / two_pi_d;

  // exp(-c L^r) <= target on the lattice boundary.
  const double half_width = std::max(1.5, std::pow(std::log(1.0 / options.boundary_target) / c, 1.0 / r));
  std::size_t points = options.points;
  if (model.dim() > 1) points = std::min<std::size_t>(points, 128);
  const GridSpec grid{model.dim(), half_width, points};
  cert.density = invert_to_density(model, grid, options.inversion);
  cert.diagnostics = density_diagnostics(cert.density);

  cert.bounded = std::isfinite(cert.density.sup_value) && cert.density.sup_value <= cert.integrability / two_pi_d + 1e-6;
  cert.continuous = cert.diagnostics.continuity_modulus <= cert.density.spacing * cert.lipschitz + 1e-6;
  cert.nonnegative = cert.diagnostics.min_value >= -1e-6;
  return cert;
}

}  // namespace autophage
