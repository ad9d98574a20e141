#include "autophage/qmc.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace autophage::qmc {

namespace {

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

unsigned prime(std::size_t i) {
  if (i >= std::size(kPrimes)) throw std::invalid_argument("qmc: dimension above 16 not supported");
  return kPrimes[i];
}

double norm(const Vector& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

}  // namespace

double radical_inverse(std::size_t index, unsigned base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

std::vector<Vector> halton(std::size_t count, std::size_t dim, std::size_t skip) {
  std::vector<Vector> pts(count, Vector(dim));
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t k = 0; k < dim; ++k) pts[i][k] = radical_inverse(i + skip, prime(k));
  return pts;
}

std::vector<Vector> sphere_directions(std::size_t count, std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("sphere_directions: dim must be >= 1");
  std::vector<Vector> dirs;
  if (dim == 1) {
    dirs = {Vector{1.0}, Vector{-1.0}};
    return dirs;
  }
  dirs.reserve(count);
  if (dim == 2) {
    for (std::size_t i = 0; i < count; ++i) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
      dirs.push_back({std::cos(a), std::sin(a)});
    }
    return dirs;
  }
  std::size_t index = 1;
  while (dirs.size() < count) {
    Vector v(dim);
    for (std::size_t k = 0; k < dim; ++k) v[k] = 2.0 * radical_inverse(index, prime(k)) - 1.0;
    ++index;
    const double r = norm(v);
    if (r > 1.0 || r < 1e-3) continue;
    for (double& x : v) x /= r;
    dirs.push_back(std::move(v));
  }
  return dirs;
}

std::vector<Vector> ball_points(std::size_t count, std::size_t dim, double radius) {
  std::vector<Vector> pts;
  pts.reserve(count);
  std::size_t index = 1;
  while (pts.size() < count) {
    Vector v(dim);
    for (std::size_t k = 0; k < dim; ++k) v[k] = 2.0 * radical_inverse(index, prime(k)) - 1.0;
    ++index;
    if (norm(v) > 1.0) continue;
    for (double& x : v) x *= radius;
    pts.push_back(std::move(v));
  }
  return pts;
}

std::vector<Vector> box_points(std::size_t count, std::size_t dim, double half_width) {
  auto pts = halton(count, dim);
  for (auto& p : pts)
    for (double& x : p) x = half_width * (2.0 * x - 1.0);
  return pts;
}

}  // namespace autophage::qmc
