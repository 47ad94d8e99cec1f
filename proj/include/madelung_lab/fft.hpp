#pragma once

#include <complex>
#include <span>

namespace mlab::fft {

/// Unnormalized in-place transforms, FFTW sign convention:
/// forward X_k = sum_j x_j e^{-2 pi i jk/n}, backward without the 1/n.
/// Safe to call concurrently; plans are cached per size.
void forward(std::span<std::complex<double>> data);
void backward(std::span<std::complex<double>> data);

}  // namespace mlab::fft
