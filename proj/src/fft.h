// Thin FFTW bridge. Plans are cached per thread and size; planning is
// serialized because the FFTW planner is not reentrant.

#pragma once

#include <complex>
#include <span>

namespace smap::detail {

// out_k = sum_n in_n exp(-2 pi i k n / N), unnormalized. in and out may alias.
void fft_forward(std::span<const std::complex<double>> in,
                 std::span<std::complex<double>> out);
// out_n = sum_k in_k exp(+2 pi i k n / N), unnormalized. in and out may alias.
void fft_backward(std::span<const std::complex<double>> in,
                  std::span<std::complex<double>> out);

}  // namespace smap::detail
