#pragma once

// Thin FFTW wrapper: cached multi-dimensional complex transforms over grid shapes.

#include <span>
#include <vector>

#include "lpg/group.hpp"

namespace lpg::detail {

/// Unnormalized forward DFT (exp(-i ...)) in place over the grid's shape.
void fft_forward(const std::vector<int>& shape, std::span<Complex> data);

/// Inverse DFT in place, normalized by 1/N so that inverse(forward(x)) == x.
void fft_inverse(const std::vector<int>& shape, std::span<Complex> data);

/// DCT-II of `in` (FFTW REDFT10, unnormalized): out_k = 2 sum_j in_j cos(pi k (j + 1/2) / n).
std::vector<double> dct2(std::span<const double> in);

/// Angular DFT frequency of index k on an axis with n nodes and spacing h (FFTW ordering).
inline double dft_frequency(int k, int n, double h) {
  const int kk = k < n / 2 ? k : k - n;
  return 2.0 * 3.14159265358979323846 * kk / (n * h);
}

}  // namespace lpg::detail
