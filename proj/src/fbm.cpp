#include "sewkit/fbm.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fft.hpp"
#include "sewkit/error.hpp"
#include "sewkit/random.hpp"

namespace sewkit {

namespace {

constexpr std::size_t kDirectLimit = std::size_t{1} << 18;

// m^a - (m-1)^a without cancellation for large m.
double power_difference(double m, double a) {
  if (m <= 1.0) return 1.0;
  return -std::pow(m, a) * std::expm1(a * std::log1p(-1.0 / m));
}

// Outputs first .. first+count-1 of the full convolution.
std::vector<double> direct_convolution(std::span<const double> kernel, std::span<const double> input,
                                       std::size_t first, std::size_t count) {
  std::vector<double> out(count, 0.0);
  for (std::size_t j = first; j < first + count; ++j) {
    double acc = 0;
    std::size_t lo = j + 1 > kernel.size() ? j + 1 - kernel.size() : 0;
    std::size_t hi = std::min(j + 1, input.size());
    for (std::size_t i = lo; i < hi; ++i) acc += kernel[j - i] * input[i];
    out[j - first] = acc;
  }
  return out;
}

}  // namespace

std::size_t FbmParams::past_cells() const {
  return static_cast<std::size_t>(std::llround(past_length() / dt()));
}

void FbmParams::validate() const {
  require(hurst > 0 && hurst < 1, ErrorCode::invalid_argument, "fbm: Hurst parameter must lie in (0,1)");
  require(dim >= 1, ErrorCode::invalid_argument, "fbm: dimension must be >= 1");
  require(horizon > 0 && std::isfinite(horizon), ErrorCode::invalid_argument, "fbm: horizon must be positive");
  require(steps >= 1, ErrorCode::invalid_argument, "fbm: need at least one time step");
  require(dt() < past_length() && past_cells() >= 1, ErrorCode::invalid_argument,
          "fbm: grid step must be smaller than the past truncation length");
}

nlohmann::json FbmParams::to_json() const {
  return {{"hurst", hurst}, {"dim", dim}, {"horizon", horizon}, {"past", past_length()}, {"steps", steps}};
}

FbmParams FbmParams::from_json(const nlohmann::json& doc) {
  FbmParams p;
  try {
    p.hurst = doc.value("hurst", p.hurst);
    p.dim = doc.value("dim", p.dim);
    p.horizon = doc.value("horizon", p.horizon);
    p.past = doc.value("past", p.past);
    p.steps = doc.value("steps", p.steps);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::config, std::string("fbm parameters: ") + e.what());
  }
  p.validate();
  return p;
}

double rho(double hurst, double u, double v) {
  require(u <= v, ErrorCode::domain, "rho: need u <= v");
  if (u == v) return 0.0;
  return std::pow(v - u, 2 * hurst) / (2 * hurst);
}

double mvn_variance(double hurst, double t) {
  const double g = std::tgamma(hurst + 0.5);
  const double c = g * g / (std::tgamma(2 * hurst + 1) * std::sin(std::numbers::pi * hurst));
  return c * std::pow(t, 2 * hurst);
}

std::shared_ptr<const FbmKernels> FbmKernels::build(const FbmParams& params) {
  params.validate();
  auto k = std::make_shared<FbmKernels>();
  k->params = params;
  k->past_cells = params.past_cells();
  k->brownian = params.hurst == 0.5;
  const double h2 = 2 * params.hurst;
  const double dt = params.dt();
  const double a = params.hurst + 0.5;
  const std::size_t n = params.steps;
  k->future.assign(n + 1, 0.0);
  for (std::size_t m = 1; m <= n; ++m)
    k->future[m] = k->brownian ? 1.0 : std::sqrt(power_difference(double(m), h2) * std::pow(dt, h2 - 1) / h2);
  k->past_avg.assign(k->past_cells + n + 1, 0.0);
  const double scale = std::pow(dt, params.hurst - 0.5) / a;
  for (std::size_t m = 1; m < k->past_avg.size(); ++m)
    k->past_avg[m] = k->brownian ? 1.0 : scale * power_difference(double(m), a);
  return k;
}

std::size_t FbmPath::grid_index(double t) const {
  const double x = t / dt();
  const double r = std::round(x);
  require(std::abs(x - r) <= 1e-9 && r >= 0 && r <= double(steps()), ErrorCode::off_grid,
          "fbm: time is not a node of the path grid");
  return static_cast<std::size_t>(r);
}

double FbmPath::conditional_mean(std::size_t coord, std::size_t i, std::size_t j) const {
  require(i <= j && j <= steps() && coord < dim(), ErrorCode::domain, "conditional_mean: need u <= v in [0,T]");
  if (i == j) return values_[coord][j];
  const auto& e = kernels_->future;
  const double* y = increments_[coord].data() + kernels_->past_cells;
  if (kernels_->brownian) return values_[coord][i];
  double acc = past_[coord][j];
  for (std::size_t l = 0; l < i; ++l) acc += e[j - l] * y[l];
  return acc;
}

double FbmPath::conditional_mean_at(std::size_t coord, double u, double v) const {
  require(u <= v, ErrorCode::domain, "conditional_mean: need u <= v");
  return conditional_mean(coord, grid_index(u), grid_index(v));
}

void FbmPath::conditional_means(std::size_t coord, std::size_t i, std::span<double> out) const {
  require(coord < dim() && i + out.size() <= steps() + 1, ErrorCode::domain,
          "conditional_means: range leaves the path grid");
  if (out.empty()) return;
  if (kernels_->brownian) {
    std::fill(out.begin(), out.end(), values_[coord][i]);
    return;
  }
  const auto& e = kernels_->future;
  const double* y = increments_[coord].data() + kernels_->past_cells;
  out[0] = values_[coord][i];
  for (std::size_t k = 1; k < out.size(); ++k) {
    const std::size_t j = i + k;
    double acc = past_[coord][j];
    const double* ek = e.data() + j;
    for (std::size_t l = 0; l < i; ++l) acc += ek[-static_cast<std::ptrdiff_t>(l)] * y[l];
    out[k] = acc;
  }
}

std::string FbmPath::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "time";
  for (std::size_t c = 0; c < dim(); ++c) os << ",B" << c;
  os << '\n';
  for (std::size_t j = 0; j <= steps(); ++j) {
    os << time(j);
    for (std::size_t c = 0; c < dim(); ++c) os << ',' << values_[c][j];
    os << '\n';
  }
  return os.str();
}

FbmSimulator::FbmSimulator(const FbmParams& params) : kernels_(FbmKernels::build(params)) {
  const std::size_t P = kernels_->past_cells, n = params.steps;
  if (!kernels_->brownian) {
    if (P * n > kDirectLimit) past_conv_ = std::make_shared<fft::RealConvolver>(kernels_->past_avg, P);
    if (n * n > kDirectLimit) future_conv_ = std::make_shared<fft::RealConvolver>(kernels_->future, n);
  }
}

FbmPath FbmSimulator::simulate(std::uint64_t seed) const {
  const std::size_t P = kernels_->past_cells, n = params().steps;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sd = std::sqrt(params().dt());
  std::vector<std::vector<double>> inc(params().dim, std::vector<double>(P + n));
  for (auto& coord : inc)
    for (double& x : coord) x = sd * normal(rng);
  return from_increments(std::move(inc), seed);
}

FbmPath FbmSimulator::simulate_stream(std::uint64_t seed, std::uint64_t k) const {
  return simulate(stream_seed(seed, k));
}

FbmPath FbmSimulator::from_increments(std::vector<std::vector<double>> increments, std::uint64_t seed) const {
  const std::size_t P = kernels_->past_cells, n = params().steps;
  require(increments.size() == params().dim, ErrorCode::invalid_argument, "fbm: one increment vector per coordinate");
  for (const auto& v : increments)
    require(v.size() == P + n, ErrorCode::invalid_argument, "fbm: increment vector has the wrong length");
  FbmPath path;
  path.kernels_ = kernels_;
  path.seed_ = seed;
  path.increments_ = std::move(increments);
  fill(path);
  return path;
}

void FbmSimulator::fill(FbmPath& path) const {
  const auto& k = *kernels_;
  const std::size_t P = k.past_cells, n = params().steps;
  path.past_.assign(params().dim, std::vector<double>(n + 1, 0.0));
  path.values_.assign(params().dim, std::vector<double>(n + 1, 0.0));
  for (std::size_t c = 0; c < params().dim; ++c) {
    std::span<const double> all = path.increments_[c];
    std::span<const double> past = all.subspan(0, P), future = all.subspan(P, n);
    auto& pp = path.past_[c];
    auto& b = path.values_[c];
    if (k.brownian) {
      for (std::size_t j = 1; j <= n; ++j) b[j] = b[j - 1] + future[j - 1];
      continue;
    }
    std::vector<double> conv_past;
    if (past_conv_) {
      conv_past = past_conv_->apply(past, P + n + 1);
      conv_past.erase(conv_past.begin(), conv_past.begin() + static_cast<std::ptrdiff_t>(P));
    } else {
      conv_past = direct_convolution(k.past_avg, past, P, n + 1);
    }
    std::vector<double> conv_future = future_conv_ ? future_conv_->apply(future, n + 1)
                                                   : direct_convolution(k.future, future, 0, n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
      pp[j] = conv_past[j] - conv_past[0];
      b[j] = pp[j] + (j == 0 ? 0.0 : conv_future[j]);
    }
  }
}

}  // namespace sewkit
