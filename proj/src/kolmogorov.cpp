#include "sewkit/kolmogorov.hpp"

#include <algorithm>
#include <cmath>

#include "sewkit/error.hpp"
#include "sewkit/stats.hpp"

namespace sewkit {

DyadicPairs::DyadicPairs(const Control& c, double horizon, int h_max) : h_max_(h_max) {
  require(h_max >= 0, ErrorCode::invalid_argument, "modulus: level must be >= 0");
  require(is_strictly_increasing(c, 65), ErrorCode::invalid_argument,
          "modulus: the control must be strictly increasing");
  const double total = c(0.0, horizon);
  require(total > 0, ErrorCode::invalid_argument, "modulus: w(0,T) must be positive");
  points_ = dyadic_points(c, 0.0, horizon, h_max);
  for (std::size_t i = 1; i < points_.size(); ++i)
    require(points_[i] > points_[i - 1], ErrorCode::invalid_argument,
            "modulus: dyadic points are not distinct; the control is not strictly increasing");
  pairs_.resize(static_cast<std::size_t>(h_max) + 1);
  for (int h = 0; h <= h_max; ++h) {
    const std::size_t stride = std::size_t{1} << (h_max - h);
    const std::size_t count = (std::size_t{1} << h) + 1;
    const double bound = std::ldexp(1.0, 1 - h) * (1 + 1e-12);
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = i + 1; j < count; ++j) {
        const double w = c(points_[i * stride], points_[j * stride]) / total;
        if (w > bound) break;
        if (w > 0) pairs_[static_cast<std::size_t>(h)].push_back({i * stride, j * stride, std::log(w)});
      }
  }
}

std::vector<double> DyadicPairs::level_sups(std::span<const double> values, double beta) const {
  require(values.size() == points_.size(), ErrorCode::invalid_argument,
          "modulus: values must be sampled at the finest dyadic level");
  std::vector<double> out(pairs_.size(), 0.0);
  for (std::size_t h = 0; h < pairs_.size(); ++h) {
    double best = 0;
    for (const auto& pr : pairs_[h])
      best = std::max(best, std::abs(values[pr.b] - values[pr.a]) * std::exp(-beta * pr.log_w));
    out[h] = best;
  }
  return out;
}

double modulus_statistic(std::span<const double> values, const DyadicPairs& pairs, double beta) {
  auto sups = pairs.level_sups(values, beta);
  return sups.empty() ? 0.0 : *std::max_element(sups.begin(), sups.end());
}

double modulus_statistic(std::span<const double> values, const Control& c, double horizon, double beta, int h_max) {
  return modulus_statistic(values, DyadicPairs(c, horizon, h_max), beta);
}

ModulusReport tail_study(std::span<const std::vector<double>> paths, const DyadicPairs& pairs,
                         std::span<const double> betas, std::span<const int> levels, double moment,
                         double stable_slope, double upward_slope) {
  require(!paths.empty(), ErrorCode::invalid_argument, "tail_study: empty ensemble");
  for (int l : levels)
    require(l >= 0 && l <= pairs.max_level(), ErrorCode::level_overflow, "tail_study: level beyond the pair family");
  ModulusReport r;
  r.betas.assign(betas.begin(), betas.end());
  r.levels.assign(levels.begin(), levels.end());
  r.moment = moment;
  const std::size_t B = betas.size(), L = levels.size(), P = paths.size();
  r.per_path.assign(B, std::vector<std::vector<double>>(L, std::vector<double>(P)));
  for (std::size_t k = 0; k < P; ++k)
    for (std::size_t b = 0; b < B; ++b) {
      auto sups = pairs.level_sups(paths[k], betas[b]);
      // running max over levels
      for (std::size_t h = 1; h < sups.size(); ++h) sups[h] = std::max(sups[h], sups[h - 1]);
      for (std::size_t l = 0; l < L; ++l) r.per_path[b][l][k] = sups[static_cast<std::size_t>(levels[l])];
    }
  r.lm_norm.assign(B, std::vector<double>(L));
  r.mean = r.median = r.q90 = r.lm_norm;
  for (std::size_t b = 0; b < B; ++b) {
    std::vector<double> x, y;
    for (std::size_t l = 0; l < L; ++l) {
      const auto& v = r.per_path[b][l];
      r.lm_norm[b][l] = moment_norm(v, moment);
      r.mean[b][l] = mean(v);
      r.median[b][l] = quantile(v, 0.5);
      r.q90[b][l] = quantile(v, 0.9);
      x.push_back(levels[l]);
      y.push_back(std::log(r.lm_norm[b][l]));
    }
    const double slope = L >= 2 ? fit_line(x, y).slope : 0.0;
    r.slopes.push_back(slope);
    r.trend.push_back(slope <= stable_slope ? "stable" : slope >= upward_slope ? "upward" : "inconclusive");
  }
  return r;
}

}  // namespace sewkit
