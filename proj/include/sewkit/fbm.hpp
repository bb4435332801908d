#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace sewkit {

namespace fft {
class RealConvolver;
}

// Fractional Brownian motion through the Mandelbrot-Van Ness integral,
// discretized on a uniform grid of [-M_past, T] with step dt = T/steps.
struct FbmParams {
  double hurst = 0.5;
  std::size_t dim = 1;
  double horizon = 1.0;
  // Past truncation length; nonpositive means 8 * horizon.
  double past = 0.0;
  std::size_t steps = 1024;

  double dt() const { return horizon / static_cast<double>(steps); }
  double past_length() const { return past > 0 ? past : 8.0 * horizon; }
  std::size_t past_cells() const;
  void validate() const;

  nlohmann::json to_json() const;
  static FbmParams from_json(const nlohmann::json& doc);
};

// (v-u)^{2H} / (2H): variance of the part of B_v driven by increments in (u,v].
double rho(double hurst, double u, double v);

// Var(B_t) = c_H t^{2H} for the (unnormalized) Mandelbrot-Van Ness kernel.
double mvn_variance(double hurst, double t);

// Kernel coefficients shared by every path with the same parameters.
struct FbmKernels {
  FbmParams params;
  std::size_t past_cells = 0;
  // future[m], m >= 1: coefficient of the increment m cells before the
  // evaluation time, chosen so that the sum of future[m]^2 * dt over
  // m = 1..k equals (k dt)^{2H}/(2H). future[0] = 0.
  std::vector<double> future;
  // past_avg[m], m >= 1: dt^{-1} * integral of u^{H-1/2} over [(m-1)dt, m dt].
  // A past cell q >= 1 (covering [-q dt, -(q-1) dt]) enters B_j with weight
  // past_avg[j+q] - past_avg[q]. past_avg[0] = 0.
  std::vector<double> past_avg;
  bool brownian = false;

  static std::shared_ptr<const FbmKernels> build(const FbmParams& params);
};

class FbmPath {
 public:
  const FbmParams& params() const { return kernels_->params; }
  const FbmKernels& kernels() const { return *kernels_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t steps() const { return kernels_->params.steps; }
  std::size_t dim() const { return kernels_->params.dim; }
  double dt() const { return kernels_->params.dt(); }
  double time(std::size_t j) const { return static_cast<double>(j) * dt(); }

  // Grid index of t in [0,T]; Error(off_grid) unless t is within 1e-9*dt of
  // a node.
  std::size_t grid_index(double t) const;

  double value(std::size_t coord, std::size_t j) const { return values_[coord][j]; }
  double value_at(std::size_t coord, double t) const { return value(coord, grid_index(t)); }
  std::span<const double> values(std::size_t coord) const { return values_[coord]; }
  // Contribution of increments before time 0 to B_j.
  std::span<const double> past_part(std::size_t coord) const { return past_[coord]; }
  // Wiener increments of the P past cells followed by the `steps` cells of
  // [0,T], in chronological order.
  std::span<const double> increments(std::size_t coord) const { return increments_[coord]; }

  // E[B_{v_j} | F_{u_i}] for grid indices i <= j. Equals B at i == j.
  double conditional_mean(std::size_t coord, std::size_t i, std::size_t j) const;
  double conditional_mean_at(std::size_t coord, double u, double v) const;
  // out[k] = E[B_{v_{i+k}} | F_{u_i}] for k = 0..out.size()-1.
  void conditional_means(std::size_t coord, std::size_t i, std::span<double> out) const;

  // Time and per-coordinate values, one row per grid node.
  std::string to_csv() const;

 private:
  friend class FbmSimulator;
  std::shared_ptr<const FbmKernels> kernels_;
  std::uint64_t seed_ = 0;
  std::vector<std::vector<double>> increments_;
  std::vector<std::vector<double>> past_;
  std::vector<std::vector<double>> values_;
};

class FbmSimulator {
 public:
  explicit FbmSimulator(const FbmParams& params);

  const FbmParams& params() const { return kernels_->params; }
  std::shared_ptr<const FbmKernels> kernels() const { return kernels_; }

  // Standard normal increments scaled by sqrt(dt) from mt19937_64(seed).
  FbmPath simulate(std::uint64_t seed) const;
  // Path k of an ensemble seeded by `seed`.
  FbmPath simulate_stream(std::uint64_t seed, std::uint64_t k) const;
  // Builds a path from given Wiener increments (past cells first), one
  // vector of length past_cells()+steps per coordinate.
  FbmPath from_increments(std::vector<std::vector<double>> increments, std::uint64_t seed = 0) const;

 private:
  void fill(FbmPath& path) const;

  std::shared_ptr<const FbmKernels> kernels_;
  std::shared_ptr<const fft::RealConvolver> past_conv_;
  std::shared_ptr<const fft::RealConvolver> future_conv_;
};

}  // namespace sewkit
