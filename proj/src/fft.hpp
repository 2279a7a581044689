#pragma once

// Thin cached-plan wrapper over FFTW; internal to the library.

#include <complex>
#include <vector>

namespace gaborwf::detail {

/// In-place unnormalized transform, sign -1: X_k = sum x_j e^{-2 pi i jk/n}; sign +1 the conjugate kernel.
void fft_inplace(std::vector<std::complex<double>>& data, int sign);

}  // namespace gaborwf::detail
