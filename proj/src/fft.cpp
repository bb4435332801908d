#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "sewkit/error.hpp"

namespace sewkit::fft {
namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per shape under this mutex and kept for
// the lifetime of the process.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

using Key = std::tuple<int, int, std::size_t, int>;  // kind, dim, n, sign

fftw_plan complex_plan(int dim, std::size_t n, int sign) {
  static std::map<Key, fftw_plan> plans;
  std::lock_guard<std::mutex> lock(plan_mutex());
  Key key{0, dim, n, sign};
  auto it = plans.find(key);
  if (it != plans.end()) return it->second;
  std::size_t total = dim == 1 ? n : n * n;
  fftw_complex* buf = fftw_alloc_complex(total);
  int ni = static_cast<int>(n);
  fftw_plan plan = dim == 1
                       ? fftw_plan_dft_1d(ni, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED)
                       : fftw_plan_dft_2d(ni, ni, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf);
  require(plan != nullptr, ErrorCode::internal, "FFTW planning failed");
  plans.emplace(key, plan);
  return plan;
}

std::pair<fftw_plan, fftw_plan> real_plans(std::size_t n) {
  static std::map<std::size_t, std::pair<fftw_plan, fftw_plan>> plans;
  std::lock_guard<std::mutex> lock(plan_mutex());
  auto it = plans.find(n);
  if (it != plans.end()) return it->second;
  double* r = fftw_alloc_real(n);
  fftw_complex* c = fftw_alloc_complex(n / 2 + 1);
  int ni = static_cast<int>(n);
  fftw_plan fwd = fftw_plan_dft_r2c_1d(ni, r, c, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_plan bwd = fftw_plan_dft_c2r_1d(ni, c, r, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(r);
  fftw_free(c);
  require(fwd && bwd, ErrorCode::internal, "FFTW planning failed");
  auto pair = std::make_pair(fwd, bwd);
  plans.emplace(n, pair);
  return pair;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

void transform(std::span<cplx> data, int dim, std::size_t n, int sign) {
  require(dim == 1 || dim == 2, ErrorCode::invalid_argument, "fft: dimension must be 1 or 2");
  require(data.size() == (dim == 1 ? n : n * n), ErrorCode::invalid_argument, "fft: size mismatch");
  fftw_plan plan = complex_plan(dim, n, sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD);
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, p, p);
}

RealConvolver::RealConvolver(std::vector<double> kernel, std::size_t max_input)
    : kernel_len_(kernel.size()) {
  size_ = next_pow2(kernel.size() + max_input + 1);
  std::vector<double> padded(size_, 0.0);
  std::copy(kernel.begin(), kernel.end(), padded.begin());
  kernel_hat_.resize(size_ / 2 + 1);
  auto [fwd, bwd] = real_plans(size_);
  (void)bwd;
  fftw_execute_dft_r2c(fwd, padded.data(), reinterpret_cast<fftw_complex*>(kernel_hat_.data()));
}

std::vector<double> RealConvolver::apply(std::span<const double> input, std::size_t out_len) const {
  require(input.size() + kernel_len_ <= size_, ErrorCode::invalid_argument,
          "RealConvolver: input longer than planned");
  std::vector<double> buf(size_, 0.0);
  std::copy(input.begin(), input.end(), buf.begin());
  std::vector<cplx> spec(size_ / 2 + 1);
  auto [fwd, bwd] = real_plans(size_);
  fftw_execute_dft_r2c(fwd, buf.data(), reinterpret_cast<fftw_complex*>(spec.data()));
  for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= kernel_hat_[k];
  fftw_execute_dft_c2r(bwd, reinterpret_cast<fftw_complex*>(spec.data()), buf.data());
  const double scale = 1.0 / static_cast<double>(size_);
  out_len = std::min(out_len, size_);
  std::vector<double> out(out_len);
  for (std::size_t j = 0; j < out_len; ++j) out[j] = buf[j] * scale;
  return out;
}

}  // namespace sewkit::fft
