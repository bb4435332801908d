#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <json.hpp>

namespace sewkit {

// A control: a continuous, nonnegative, superadditive weight w(s,t) on the
// simplex {0 <= s <= t <= T}, with w(s,s) = 0.
class Control {
 public:
  enum class Kind { linear, power, besov_data, tabulated };

  // w(s,t) = t - s.
  static Control linear(double horizon);
  // w(s,t) = scale * (t - s)^kappa, kappa >= 1.
  static Control power(double horizon, double scale, double kappa);
  // Built from a piecewise-constant time profile of spatial norms |f_r|
  // (one value per uniform cell of [0,T]):
  //   w(s,t)^{1-H*gamma} = (int_s^t |f_r|^theta dr)^{1/theta} (t-s)^{1-H*gamma-1/theta}.
  // theta may be +infinity (ess-sup in time).
  static Control besov_data(double horizon, std::vector<double> profile_norms, double theta,
                            double hurst, double gamma);
  // Values on the uniform grid t_i = i*T/n, row-major (n+1)x(n+1); only the
  // upper triangle (i <= j) is read. Evaluation interpolates bilinearly.
  static Control tabulated(double horizon, std::size_t n, std::vector<double> values);
  // Samples fn on the uniform grid and returns the tabulated control. No
  // superadditivity check is made here; see check_superadditive.
  static Control tabulate(double horizon, std::size_t n,
                          const std::function<double(double, double)>& fn);

  Kind kind() const;
  double horizon() const;
  // Relative superadditivity slack appropriate for this kind.
  double tolerance() const;

  // Throws Error(domain) if s > t or the pair leaves [0, T].
  double operator()(double s, double t) const;
  double eval(double s, double t) const { return (*this)(s, t); }

  // Closed-form w-midpoint where one exists (linear and power kinds).
  bool has_closed_form_midpoint() const;
  double closed_form_midpoint(double s, double t) const;

  nlohmann::json to_json() const;
  static Control from_json(const nlohmann::json& doc);

  struct Impl;

 private:
  explicit Control(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

const char* control_kind_name(Control::Kind kind);

// Strictly increasing times t_0 < ... < t_N. A single point is the
// degenerate partition whose Riemann sums are empty.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<double> points);
  // Removes repeated points (dyadic points of a control with flat parts may
  // repeat) and validates ordering.
  static Partition from_sorted_with_repeats(std::span<const double> points);
  static Partition uniform(double s, double t, std::size_t intervals);

  std::span<const double> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  std::size_t intervals() const { return points_.empty() ? 0 : points_.size() - 1; }
  double front() const { return points_.front(); }
  double back() const { return points_.back(); }

 private:
  std::vector<double> points_;
};

// u = inf{ r in [s,t] : w(s,r) >= w(s,t)/2 }. Closed form for linear and
// power controls, bisection to absolute tolerance rel_tol*(t-s) otherwise.
double w_midpoint(const Control& c, double s, double t, double rel_tol = 1e-12);
// The bisection route regardless of kind; returns the leftmost point within
// tolerance that satisfies w(s,u) >= w(s,t)/2.
double bisect_midpoint(const Control& c, double s, double t, double rel_tol = 1e-12);

inline constexpr int kDefaultMaxDyadicLevel = 24;

// Levels 0..h of the w-dyadic points of [s,t]; levels[k] has 2^k + 1 points.
struct DyadicTree {
  double s = 0.0;
  double t = 0.0;
  std::vector<std::vector<double>> levels;
};

DyadicTree dyadic_tree(const Control& c, double s, double t, int h,
                       int h_max = kDefaultMaxDyadicLevel);
std::vector<double> dyadic_points(const Control& c, double s, double t, int h,
                                  int h_max = kDefaultMaxDyadicLevel);
Partition dyadic_partition(const Control& c, double s, double t, int h,
                           int h_max = kDefaultMaxDyadicLevel);

// |pi|_w = max over intervals of w(u,v); 0 for a single-point partition.
double mesh(const Control& c, const Partition& pi);

struct SuperadditivityReport {
  // max over grid triples s<=u<=t of (w(s,u)+w(u,t)-w(s,t)) / w(s,t), with
  // w(0,T) as the scale when w(s,t) = 0.
  double max_violation = 0.0;
  std::array<double, 3> witness{0.0, 0.0, 0.0};
  std::size_t triples = 0;
  double tolerance = 0.0;
  bool ok() const { return max_violation <= tolerance; }
};

SuperadditivityReport check_superadditive(const Control& c, std::size_t grid_n);

// w(u,v) < w(s,t) whenever [u,v] is strictly inside [s,t], checked on a
// uniform grid with grid_n points.
bool is_strictly_increasing(const Control& c, std::size_t grid_n);

}  // namespace sewkit
