#pragma once

#include <complex>
#include <span>
#include <vector>

namespace depoisson::fft {

using cd = std::complex<double>;

// Unnormalized DFT, out[k] = Σ_j in[j] e^{sign·2πi jk/n} with sign = ±1.
// Backed by FFTW; plans are cached and safe to use from several threads.
std::vector<cd> dft(std::span<const cd> in, int sign);

// Two-dimensional variant on a row-major n0×n1 array.
std::vector<cd> dft2(std::span<const cd> in, std::size_t n0, std::size_t n1, int sign);

}  // namespace depoisson::fft
