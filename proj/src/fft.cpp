#include "autophage/fft.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace autophage::fft {

namespace {

std::vector<std::size_t> factorize(std::size_t n) {
  std::vector<std::size_t> f;
  for (std::size_t p : {4, 2, 3, 5, 7}) {
    while (n % p == 0 && n > 1) {
      f.push_back(p);
      n /= p;
    }
  }
  for (std::size_t p = 11; p * p <= n; p += 2)
    while (n % p == 0) {
      f.push_back(p);
      n /= p;
    }
  if (n > 1) f.push_back(n);
  return f;
}

class Plan {
 public:
  Plan(std::size_t n, Sign sign) : n_(n), factors_(factorize(n)), twiddle_(n) {
    const double s = static_cast<double>(static_cast<int>(sign));
    for (std::size_t j = 0; j < n; ++j)
      twiddle_[j] = std::polar(1.0, s * 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
  }

  void run(const Complex* in, Complex* out) const { step(in, out, n_, 1, 0); }

 private:
  // Decimation in time: split the input by stride into p sub-sequences.
  void step(const Complex* in, Complex* out, std::size_t n, std::size_t stride, std::size_t fi) const {
    if (n == 1) {
      out[0] = in[0];
      return;
    }
    const std::size_t p = factors_[fi];
    const std::size_t m = n / p;
    for (std::size_t q = 0; q < p; ++q) step(in + q * stride, out + q * m, m, stride * p, fi + 1);

    // Twiddle index for root exp(s 2 pi i / n) is multiplied by n_/n.
    const std::size_t scale = n_ / n;
    std::vector<Complex> tmp(p);
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t q = 0; q < p; ++q) tmp[q] = out[q * m + k];
      for (std::size_t u = 0; u < p; ++u) {
        const std::size_t idx = k + u * m;
        Complex acc = tmp[0];
        for (std::size_t q = 1; q < p; ++q) acc += tmp[q] * twiddle_[(q * idx % n) * scale];
        out[idx] = acc;
      }
    }
  }

  std::size_t n_;
  std::vector<std::size_t> factors_;
  std::vector<Complex> twiddle_;
};

}  // namespace

std::vector<Complex> transform(std::span<const Complex> in, Sign sign) {
  std::vector<Complex> out(in.size());
  if (in.empty()) return out;
  Plan(in.size(), sign).run(in.data(), out.data());
  return out;
}

void transform_nd(std::vector<Complex>& data, std::span<const std::size_t> extents, Sign sign) {
  const std::size_t total = std::accumulate(extents.begin(), extents.end(), std::size_t{1}, std::multiplies<>());
  if (total != data.size()) throw std::invalid_argument("transform_nd: extents do not match data size");
  std::size_t inner = total;
  std::size_t outer = 1;
  for (std::size_t axis = 0; axis < extents.size(); ++axis) {
    const std::size_t n = extents[axis];
    inner /= n;
    const Plan plan(n, sign);
    std::vector<Complex> line(n), res(n);
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t i = 0; i < inner; ++i) {
        const std::size_t base = o * n * inner + i;
        for (std::size_t j = 0; j < n; ++j) line[j] = data[base + j * inner];
        plan.run(line.data(), res.data());
        for (std::size_t j = 0; j < n; ++j) data[base + j * inner] = res[j];
      }
    outer *= n;
  }
}

}  // namespace autophage::fft
