#ifndef MODSPACE_FFT_HPP
#define MODSPACE_FFT_HPP

#include <cstddef>

#include "modspace/util.hpp"

namespace modspace {

// In-place radix-2 DFT, n a power of two.
//   forward: X[m] = sum_k x[k] e^{-2 pi i k m / n}
//   inverse: X[m] = sum_k x[k] e^{+2 pi i k m / n}   (no 1/n factor)
// Twiddle tables are cached per thread, so concurrent calls are safe.
void fft(cplx* data, std::size_t n, bool inverse);

// Strided transform of `count` interleaved lines (line i starts at data + i,
// elements stride apart). Used for the axis passes of multi-dim transforms.
void fft_lines(cplx* data, std::size_t n, std::size_t stride, std::size_t count, bool inverse);

} // namespace modspace

#endif
