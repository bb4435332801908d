#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sewkit {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
};

// Ordinary least squares y = intercept + slope * x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Fit of log(y) against log(x); pairs with y <= 0 are skipped.
LineFit fit_loglog(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> v);
// Unbiased sample variance.
double variance(std::span<const double> v);
double standard_error(std::span<const double> v);
double rms(std::span<const double> v);
// (mean |v|^m)^{1/m}
double moment_norm(std::span<const double> v, double m);
// Linear-interpolated empirical quantile, q in [0,1].
double quantile(std::vector<double> v, double q);

}  // namespace sewkit
