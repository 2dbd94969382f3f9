#pragma once

#include <span>
#include <vector>

namespace renyi::detail {

/// Linear convolution of a and b (size |a| + |b| - 1) through a zero-padded real FFT.
[[nodiscard]] std::vector<double> fft_convolve(std::span<const double> a, std::span<const double> b);

} // namespace renyi::detail
