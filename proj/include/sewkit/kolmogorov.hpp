#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sewkit/control.hpp"

namespace sewkit {

// The pair family of the chaining argument: for each level h <= h_max, pairs
// (s,t) of w-dyadic points of level h with s < t and w(s,t) <= 2^{1-h}, w
// normalized so that w(0,T) = 1. Points are indexed into the finest level.
class DyadicPairs {
 public:
  // Error(invalid_argument) unless the control is strictly increasing.
  DyadicPairs(const Control& c, double horizon, int h_max);

  int max_level() const { return h_max_; }
  // The 2^h_max + 1 points of the finest level.
  std::span<const double> points() const { return points_; }

  // sup over level-h pairs of |x_t - x_s| / w(s,t)^beta for h = 0..h_max;
  // values are sampled at points().
  std::vector<double> level_sups(std::span<const double> values, double beta) const;

 private:
  struct Pair {
    std::size_t a, b;
    double log_w;
  };
  int h_max_;
  std::vector<double> points_;
  std::vector<std::vector<Pair>> pairs_;
};

// M_beta over levels 0..h_max.
double modulus_statistic(std::span<const double> values, const DyadicPairs& pairs, double beta);
// Convenience overload building the pair family.
double modulus_statistic(std::span<const double> values, const Control& c, double horizon, double beta, int h_max);

struct ModulusReport {
  std::vector<double> betas;
  std::vector<int> levels;
  double moment = 8.0;
  // indexed [beta][level]
  std::vector<std::vector<double>> lm_norm;
  std::vector<std::vector<double>> mean;
  std::vector<std::vector<double>> median;
  std::vector<std::vector<double>> q90;
  // slope of log(lm_norm) against level, and its classification
  std::vector<double> slopes;
  std::vector<std::string> trend;
  // per-path values: [beta][level][path]
  std::vector<std::vector<std::vector<double>>> per_path;
};

// Statistics of M_beta (cut at each level in `levels`) over an ensemble of
// sampled paths. Each path holds values at pairs.points().
ModulusReport tail_study(std::span<const std::vector<double>> paths, const DyadicPairs& pairs,
                         std::span<const double> betas, std::span<const int> levels, double moment,
                         double stable_slope, double upward_slope);

}  // namespace sewkit
