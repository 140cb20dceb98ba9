#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace tomokit::detail {

// In-place unnormalized DFT over a row-major array of the given rank.
// sign = -1 computes sum x_m exp(-2 pi i j m / N); sign = +1 the conjugate kernel.
void fft(std::vector<std::complex<double>>& data, int rank, const std::array<std::size_t, 3>& shape, int sign);

inline void fft1(std::vector<std::complex<double>>& data, int sign) {
    fft(data, 1, {data.size(), 1, 1}, sign);
}

}  // namespace tomokit::detail
