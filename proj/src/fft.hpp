#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace sewkit::fft {

using cplx = std::complex<double>;

// In-place unnormalized DFT over a d-dimensional cube with n points per axis
// (row-major). sign = -1 forward, +1 backward.
void transform(std::span<cplx> data, int dim, std::size_t n, int sign);

// Linear convolution of a fixed real kernel with real inputs, evaluated by
// zero-padded FFT. out[j] = sum_i kernel[j - i] * input[i].
class RealConvolver {
 public:
  RealConvolver(std::vector<double> kernel, std::size_t max_input);
  // Returns the first `out_len` entries of the full convolution.
  std::vector<double> apply(std::span<const double> input, std::size_t out_len) const;
  std::size_t size() const { return size_; }

 private:
  std::size_t size_ = 0;
  std::size_t kernel_len_ = 0;
  std::vector<cplx> kernel_hat_;
};

}  // namespace sewkit::fft
