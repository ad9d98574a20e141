#pragma once

// Deterministic low-discrepancy point sets used wherever a verdict must be
// reproducible from the sample-count parameters alone.

#include "autophage/linops.hpp"

#include <cstddef>
#include <vector>

namespace autophage::qmc {

/// Radical inverse of index in the given prime base.
double radical_inverse(std::size_t index, unsigned base);

/// Halton points in [0,1)^dim, skipping the first `skip` indices.
std::vector<Vector> halton(std::size_t count, std::size_t dim, std::size_t skip = 1);

/// Quasi-uniform unit directions. d=1 gives {+1,-1}, d=2 equally spaced
/// angles starting at 0, d>=3 normalized Halton points of the unit ball.
std::vector<Vector> sphere_directions(std::size_t count, std::size_t dim);

/// Quasi-uniform points in the ball of the given radius.
std::vector<Vector> ball_points(std::size_t count, std::size_t dim, double radius);

/// Quasi-uniform points in the box [-half_width, half_width]^dim.
std::vector<Vector> box_points(std::size_t count, std::size_t dim, double half_width);

}  // namespace autophage::qmc
