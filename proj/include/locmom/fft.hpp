#pragma once

#include <complex>
#include <span>

// Thin wrapper over FFTW. Plans are cached per (length, direction) behind a
// mutex; execution uses the new-array interface and is safe to call from
// several threads at once.

namespace locmom::fft {

/// In place: X_k = sum_j x_j exp(-2 pi i j k / n).
void forward(std::span<std::complex<double>> data);
/// In place, unnormalized: x_j = sum_k X_k exp(+2 pi i j k / n).
void backward(std::span<std::complex<double>> data);

void forward(std::span<std::complex<long double>> data);
void backward(std::span<std::complex<long double>> data);

}  // namespace locmom::fft
