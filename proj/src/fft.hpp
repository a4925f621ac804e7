#pragma once

#include <complex>
#include <span>

namespace fkp::detail {

// Forward 2D transform of real samples, normalised by 1/(nx*ny) so the output
// holds Fourier-series coefficients in FFT order.
void fft_forward(int nx, int ny, std::span<const double> in, std::span<std::complex<double>> out);

// Inverse transform; the real part of the synthesis is written to out.
void fft_inverse(int nx, int ny, std::span<const std::complex<double>> in, std::span<double> out);

// Complex-to-complex variants used where the imaginary residual matters.
void fft_forward_c(int nx, int ny, std::span<const std::complex<double>> in,
                   std::span<std::complex<double>> out);
void fft_inverse_c(int nx, int ny, std::span<const std::complex<double>> in,
                   std::span<std::complex<double>> out);

}  // namespace fkp::detail
