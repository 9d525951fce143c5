#include "modspace/fft.hpp"

#include <cmath>
#include <unordered_map>
#include <vector>

namespace modspace {

namespace {

struct Plan {
  std::vector<cplx> twiddle; // e^{-2 pi i j / n}, j < n/2
  std::vector<std::uint32_t> bitrev;
};

const Plan& plan_for(std::size_t n) {
  thread_local std::unordered_map<std::size_t, Plan> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  Plan p;
  p.twiddle.resize(n / 2);
  for (std::size_t j = 0; j < n / 2; ++j) {
    double ang = -kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    p.twiddle[j] = {std::cos(ang), std::sin(ang)};
  }
  p.bitrev.resize(n);
  std::size_t log2n = 0;
  while ((std::size_t{1} << log2n) < n) ++log2n;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < log2n; ++b)
      if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (log2n - 1 - b);
    p.bitrev[i] = static_cast<std::uint32_t>(r);
  }
  return cache.emplace(n, std::move(p)).first->second;
}

} // namespace

void fft(cplx* data, std::size_t n, bool inverse) {
  if (n == 1) return;
  if (!is_pow2(n)) throw std::invalid_argument("fft: length must be a power of two");
  const Plan& plan = plan_for(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = plan.bitrev[i];
    if (i < j) std::swap(data[i], data[j]);
  }
  // Butterflies in real arithmetic: complex operator* would route through
  // the IEEE corner-case library call on the hot path.
  const double wsign = inverse ? -1.0 : 1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    std::size_t half = len >> 1;
    std::size_t step = n / len;
    for (std::size_t base = 0; base < n; base += len) {
      for (std::size_t j = 0; j < half; ++j) {
        cplx w = plan.twiddle[j * step];
        double wr = w.real(), wi = wsign * w.imag();
        cplx u = data[base + j];
        cplx v = data[base + j + half];
        double tr = v.real() * wr - v.imag() * wi;
        double ti = v.real() * wi + v.imag() * wr;
        data[base + j] = cplx(u.real() + tr, u.imag() + ti);
        data[base + j + half] = cplx(u.real() - tr, u.imag() - ti);
      }
    }
  }
}

void fft_lines(cplx* data, std::size_t n, std::size_t stride, std::size_t count, bool inverse) {
  if (stride == 1) {
    for (std::size_t i = 0; i < count; ++i) fft(data + i * n, n, inverse);
    return;
  }
  thread_local std::vector<cplx> scratch;
  scratch.resize(n);
  for (std::size_t i = 0; i < count; ++i) {
    cplx* base = data + i;
    for (std::size_t k = 0; k < n; ++k) scratch[k] = base[k * stride];
    fft(scratch.data(), n, inverse);
    for (std::size_t k = 0; k < n; ++k) base[k * stride] = scratch[k];
  }
}

} // namespace modspace
