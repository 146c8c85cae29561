#pragma once

#include <complex>
#include <span>

namespace isac {

/// Unnormalized in-place complex DFT of length n backed by FFTW.
///   forward:  X[k] = sum_n x[n] e^{-j2*pi*nk/n}
///   backward: x[n] = sum_k X[k] e^{+j2*pi*nk/n}
/// Plans are created once per (size, direction) and shared; execution is
/// thread-safe.
void fft_forward(std::span<std::complex<double>> data);
void fft_backward(std::span<std::complex<double>> data);

}  // namespace isac
