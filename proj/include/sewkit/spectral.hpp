#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace sewkit {

using cplx = std::complex<double>;

// Periodic grid on [-L, L)^d with n points per axis, x_i = -L + i*h.
struct GridSpec {
  int dim = 1;
  std::size_t n = 256;
  double half_period = 8.0;

  void validate() const;
  std::size_t size() const { return dim == 1 ? n : n * n; }
  double h() const { return 2 * half_period / static_cast<double>(n); }
  double cell_volume() const;
  double volume() const;
  double node(std::size_t i) const { return -half_period + static_cast<double>(i) * h(); }
  // Angular frequency pi*k'/L of axis index k, k' the signed index in [-n/2, n/2).
  double frequency(std::size_t k) const;
  // |xi|^2 of a flat (row-major) mode index.
  double frequency_sq(std::size_t idx) const;
  // Per-axis frequencies of a flat mode index (second entry 0 when d = 1).
  std::array<double, 2> frequency_vec(std::size_t idx) const;
  double max_frequency() const;

  bool operator==(const GridSpec&) const = default;
  nlohmann::json to_json() const;
  static GridSpec from_json(const nlohmann::json& doc);
};

class SpectralField;

// Complex samples on the grid.
class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(const GridSpec& spec);
  GridFunction(const GridSpec& spec, std::vector<cplx> values);

  static GridFunction from_function(const GridSpec& spec, const std::function<cplx(double, double)>& fn);
  static GridFunction constant(const GridSpec& spec, cplx c);
  // amplitude * exp(i lambda . x)
  static GridFunction plane_wave(const GridSpec& spec, std::array<double, 2> lambda, cplx amplitude = 1.0);
  // Unit mass at the node x = 0: value 1/h^d there and 0 elsewhere.
  static GridFunction dirac(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  std::span<const cplx> values() const { return values_; }
  std::span<cplx> values() { return values_; }
  std::size_t size() const { return values_.size(); }

  SpectralField spectrum() const;

  GridFunction& operator+=(const GridFunction& o);
  GridFunction& operator-=(const GridFunction& o);
  GridFunction& operator*=(double c);

  // x,re,im rows; d = 1 only.
  std::string to_csv() const;

 private:
  GridSpec spec_;
  std::vector<cplx> values_;
};

// Coefficients c_k of g(x) = sum_k c_k exp(i xi_k . x) on the grid.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(const GridSpec& spec);
  SpectralField(const GridSpec& spec, std::vector<cplx> coeffs);

  // c_k = (2L)^{-d} for every mode: the grid Dirac at x = 0.
  static SpectralField dirac(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  std::span<const cplx> coeffs() const { return coeffs_; }
  std::span<cplx> coeffs() { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }

  GridFunction to_grid() const;

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double c);

 private:
  GridSpec spec_;
  std::vector<cplx> coeffs_;
};

// Grid L^p norm with cell weights h^d; p = inf gives the max.
double lp_norm(const GridFunction& g, double p);
// Grid L^2 norm.
double value_norm(const GridFunction& g);
// Grid L^2 norm through Parseval.
double value_norm(const SpectralField& g);

// Multiplication by exp(-kappa |xi|^2 / 2).
SpectralField heat_convolve(const SpectralField& g, double kappa);
GridFunction heat_convolve(const GridFunction& g, double kappa);

// g(. + y) through the phase exp(i xi . y).
SpectralField shift(const SpectralField& g, std::span<const double> y);
GridFunction shift(const GridFunction& g, std::span<const double> y);

// Smooth dyadic partition of unity: block j >= 0 lives on 2^{j-1} < |xi| <
// 2^{j+1}, block -1 on |xi| < 1. Values sum to 1 at every frequency.
double block_symbol(int j, double abs_xi);
// Largest block with a nonzero symbol at some grid frequency.
int max_block(const GridSpec& spec);

struct BlockResult {
  GridFunction value;
  bool beyond_nyquist = false;
};
BlockResult lp_block(const GridFunction& g, int j);
SpectralField lp_block(const SpectralField& g, int j);

struct BesovIndices {
  double alpha = 0.0;
  double p = 2.0;
  double q = 2.0;
  void validate() const;
};

// |Delta_j g|_{L^p} for j = -1..max_block(spec), index 0 holding j = -1.
std::vector<double> block_norms(const SpectralField& g, double p);
double besov_from_block_norms(std::span<const double> norms, double alpha, double q);
double besov_norm(const SpectralField& g, const BesovIndices& b);
double besov_norm(const GridFunction& g, const BesovIndices& b);

// Random fields. Coefficients are i.i.d. complex normals on the selected
// modes; the draw order depends only on the modes, not on n.
SpectralField random_band_limited(const GridSpec& spec, double lambda, std::uint64_t seed);
// Random field filtered by the block symbol of j (frequencies near 2^j).
SpectralField random_annulus(const GridSpec& spec, int j, std::uint64_t seed);
// Sum of `waves` plane waves per block j = 0..max_j at frequencies that
// do not depend on n, with amplitudes 2^{-j*alpha}.
SpectralField random_multi_block(const GridSpec& spec, double alpha, int max_j, int waves, std::uint64_t seed);

struct BernsteinReport {
  double max_ratio = 0.0;
  std::size_t trials = 0;
};
// max over trials of |grad^k g|_{L^q} / (lambda^{k + d(1/p - 1/q)} |g|_{L^p}),
// g band-limited to |xi| <= lambda.
BernsteinReport bernstein_check(const GridSpec& spec, double lambda, int k, double p, double q,
                                std::size_t trials, std::uint64_t seed);
// Same statistic for a single given field.
double bernstein_ratio(const SpectralField& g, double lambda, int k, double p, double q);

enum class AnnulusEnsemble { plane_wave, random };

struct HeatDecayReport {
  double c_hat = 0.0;
  double C_hat = 0.0;
  double r2 = 0.0;
  std::vector<double> x;          // kappa * lambda^2
  std::vector<double> log_ratio;  // mean log ratio over trials
};
// Fits log(|P_kappa g|_p / |g|_p) against kappa*lambda^2; c_hat = -slope,
// C_hat = exp(intercept). The plane-wave ensemble uses the wave exp(i lambda x1),
// the random ensemble uses random_annulus at j = log2(lambda).
HeatDecayReport heat_decay_check(const GridSpec& spec, double lambda, std::span<const double> kappas, double p,
                                 AnnulusEnsemble ensemble, std::size_t trials, std::uint64_t seed);

struct PagReport {
  double sup_stat = 0.0;
  double argmax_kappa = 0.0;
  std::vector<double> stats;
};
// sup over kappa of besov(P_kappa g; alpha+gamma, p, q) / ((1 + kappa^{-gamma/2}) besov(g; alpha, p, inf)).
PagReport pag_check(const SpectralField& g, double alpha, double gamma, double p, double q,
                    std::span<const double> kappas);

// Binary layout: "SWKG", u32 version, u32 d, u32 n, f64 L, then n^d
// little-endian complex64 (f32 re, f32 im) values in row-major order.
void write_grid_binary(const std::string& path, const GridFunction& g);
GridFunction read_grid_binary(const std::string& path);

}  // namespace sewkit
