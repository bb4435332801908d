#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "sewkit/control.hpp"
#include "sewkit/fbm.hpp"
#include "sewkit/sewing.hpp"
#include "sewkit/spectral.hpp"

namespace sewkit {

// Spatial profile f_r(x) = a(r) g(x) with a time weight a (1 when unset).
struct TimeProfile {
  enum class Kind { constant, plane_wave, gaussian_bump, dirac, besov_random };
  Kind kind = Kind::constant;
  double amplitude = 1.0;  // constant value
  std::array<double, 2> lambda{1.0, 0.0};  // plane-wave frequency
  double sigma = 0.5;                      // bump width
  double alpha = 0.0;                      // besov_random block scaling
  int max_block = 2;                       // besov_random blocks 0..max_block
  int waves = 2;                           // besov_random waves per block
  std::uint64_t seed = 1;                  // besov_random draw
  double theta = std::numeric_limits<double>::infinity();  // time integrability
  std::function<double(double)> time_weight;

  // Fourier coefficients of g on the grid.
  SpectralField spatial(const GridSpec& spec) const;
  // Pointwise g(x) for the closed-form kinds (Error(unsupported) otherwise).
  cplx evaluate(double x, double y = 0.0) const;
  double weight(double r) const { return time_weight ? time_weight(r) : 1.0; }
  // The r = s cell is smoothed with rho of one cell instead of rho = 0.
  bool singular() const { return kind == Kind::dirac; }

  nlohmann::json to_json() const;
  static TimeProfile from_json(const nlohmann::json& doc);
};

const char* profile_kind_name(TimeProfile::Kind kind);

// The modes carrying a nonzero coefficient of a profile, with cached
// frequencies; every ModalField of one computation shares one ModeSet.
struct ModeSet {
  GridSpec spec;
  std::vector<std::size_t> index;
  std::vector<std::array<long, 2>> signed_index;
  std::vector<double> xi_sq;
  std::vector<cplx> base;  // profile coefficients on the modes

  static std::shared_ptr<const ModeSet> from_field(const SpectralField& g);
};

// Coefficients restricted to a ModeSet. The norm is the grid L^2 norm.
class ModalField {
 public:
  ModalField() = default;
  explicit ModalField(std::shared_ptr<const ModeSet> modes);

  const std::shared_ptr<const ModeSet>& modes() const { return modes_; }
  std::span<const cplx> coeffs() const { return c_; }
  std::span<cplx> coeffs() { return c_; }

  SpectralField to_spectral() const;
  GridFunction to_grid() const { return to_spectral().to_grid(); }

  ModalField& operator+=(const ModalField& o);
  ModalField& operator-=(const ModalField& o);
  ModalField& operator*=(double c);

 private:
  std::shared_ptr<const ModeSet> modes_;
  std::vector<cplx> c_;
};

double value_norm(const ModalField& f);

// A_{s,t}(x) = sum over path-grid cells [r, r+dt) of [s,t) of
//   dt * a(r) * (P_{rho(s,r)} g)(E_s B_r + x)
// evaluated in frequency space, plus the direct quadrature reference.
class FunctionalGerm {
 public:
  FunctionalGerm(const TimeProfile& f, const GridSpec& spec, const FbmPath& path);

  const ModeSet& modes() const { return *modes_; }
  ModalField zero() const { return ModalField(modes_); }

  ModalField germ(std::size_t i, std::size_t k) const;
  ModalField germ_at(double s, double t) const;
  // sum over the partition's intervals; points must be path-grid nodes.
  ModalField riemann(const Partition& pi) const;
  // sum over cells [r, r+dt) of [0, t_k) of dt * a(r) * g(B_r + x)
  ModalField reference(std::size_t k) const;
  ModalField reference_at(double t) const;

  Germ<ModalField> as_germ() const;

 private:
  const std::vector<double>& damping(std::size_t cells) const;
  void accumulate_cell(ModalField& out, double weight, const double* damp, const double* position) const;

  TimeProfile profile_;
  const FbmPath* path_;
  std::shared_ptr<const ModeSet> modes_;
  double hurst_ = 0.5;
  mutable std::vector<std::vector<double>> damping_;
  mutable std::vector<cplx> scratch_[2];
};

// Convenience wrappers returning grid functions.
GridFunction germ_value(const TimeProfile& f, const GridSpec& spec, const FbmPath& path, double s, double t);
GridFunction functional_riemann(const TimeProfile& f, const GridSpec& spec, const FbmPath& path, const Partition& pi);
GridFunction functional_reference(const TimeProfile& f, const GridSpec& spec, const FbmPath& path, double t);

struct ExponentBudget {
  double hurst = 0.5;
  int dim = 1;
  double theta = 2.0;
  double alpha = 0.0;
  double p = 2.0;
  double q = 2.0;

  double p_hat = 2.0;         // min(2, theta, p, q)
  double gamma_max = 0.0;     // (1/H)(1 - 1/p_hat)
  double beta_max = 0.0;      // alpha - d/p + (1/H)(1 - 1/min(2, theta, p))
  bool gamma_positive = false;
  bool beta_positive = false;
  // L^v range of the Dirac-class functional (theta >= 2); empty when
  // H*d >= 1 or theta < 2.
  bool dirac_range_valid = false;
  double v_min = 2.0;
  double v_max = 0.0;
  bool v_max_inclusive = false;

  // 1 - H*gamma - 1/theta
  double time_exponent(double gamma) const;
  nlohmann::json to_json() const;
};

ExponentBudget regularity_budget(double hurst, int dim, double theta, double alpha, double p, double q);

struct RegularityProbeConfig {
  TimeProfile profile;
  FbmParams fbm;
  double half_period = 8.0;
  std::vector<std::size_t> spatial_n{128, 256, 512};
  std::vector<double> gammas;
  BesovIndices besov{-0.51, 2.0, 2.0};
  double moment = 2.0;
  std::size_t paths = 40;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  // Trend classification of the slope of log2(statistic) against log2(n).
  double stable_slope = 0.1;
  double upward_slope = 0.15;
};

struct RegularityProbeReport {
  std::vector<double> gammas;
  std::vector<std::size_t> spatial_n;
  // stat[g][k]: L^m norm over paths of the B^{alpha+gamma_g}_{p,q} norm of I_t on grid n_k
  std::vector<std::vector<double>> stat;
  std::vector<double> slopes;
  std::vector<std::string> trend;  // "stable", "upward" or "inconclusive"
};

RegularityProbeReport regularity_probe(const RegularityProbeConfig& cfg);

struct OccupationResult {
  cplx pairing{};           // <g, I^pi[dirac]_t> on the grid
  cplx direct{};            // sum over path cells of dt * g(-B_r)
  double residual = 0.0;    // |pairing - direct| / max(|direct|, tiny)
};

// Compares the grid pairing of g with the Dirac functional to the
// occupation-time sum. t must be a path-grid node and pi a partition of [0,t]
// on the path grid.
OccupationResult occupation_check(const FbmPath& path, const TimeProfile& g, const GridSpec& spec,
                                  const Partition& pi);

}  // namespace sewkit
