#pragma once

#include <complex>
#include <cstddef>

namespace wpsdo::detail {

// In-place complex FFT of a 1D (n) or row-major 2D (n x n) array.
// sign = -1 forward, +1 backward; unnormalized.
void fft_inplace(std::complex<double>* data, int dim, std::size_t n, int sign);

}  // namespace wpsdo::detail
