#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace autophage::fft {

using Complex = std::complex<double>;

enum class Sign : int { negative = -1, positive = +1 };

/// out[k] = sum_j in[j] exp(sign * 2 pi i j k / n). Unnormalized.
/// Mixed-radix Cooley-Tukey; prime factors above 64 fall back to a direct sum.
std::vector<Complex> transform(std::span<const Complex> in, Sign sign);

/// Multi-dimensional transform of a row-major array with the given extents.
void transform_nd(std::vector<Complex>& data, std::span<const std::size_t> extents, Sign sign);

}  // namespace autophage::fft
