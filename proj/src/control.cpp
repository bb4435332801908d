#include "sewkit/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sewkit/error.hpp"

namespace sewkit {

struct Control::Impl {
  Kind kind = Kind::linear;
  double horizon = 1.0;
  // power
  double scale = 1.0;
  double kappa = 1.0;
  // besov_data
  std::vector<double> profile;
  double theta = 2.0;
  double hurst = 0.5;
  double gamma = 0.0;
  double cell = 1.0;
  double exponent = 1.0;          // 1/(theta(1-H gamma)), or 1/(1-H gamma) when theta = inf
  std::vector<double> prefix;     // prefix integrals of |f|^theta
  std::vector<std::vector<double>> sparse_max;  // theta = inf: range maxima
  // tabulated
  std::size_t n = 0;
  std::vector<double> values;

  double tabulated_at(std::size_t i, std::size_t j) const {
    return i <= j ? values[i * (n + 1) + j] : -values[j * (n + 1) + i];
  }

  double besov_integral(double s, double t) const {
    auto primitive = [&](double x) {
      double pos = x / cell;
      auto k = static_cast<std::size_t>(std::floor(pos));
      if (k >= profile.size()) return prefix.back();
      double frac = pos - static_cast<double>(k);
      return prefix[k] + frac * cell * std::pow(profile[k], theta);
    };
    return std::max(0.0, primitive(t) - primitive(s));
  }

  double besov_sup(double s, double t) const {
    const std::size_t m = profile.size();
    auto lo = static_cast<std::size_t>(std::floor(s / cell));
    // cells meeting the open interval (s,t)
    double hi_pos = t / cell;
    auto hi = static_cast<std::size_t>(std::ceil(hi_pos)) ;
    hi = hi == 0 ? 0 : hi - 1;
    lo = std::min(lo, m - 1);
    hi = std::min(std::max(hi, lo), m - 1);
    std::size_t len = hi - lo + 1;
    int level = 0;
    while ((std::size_t{2} << level) <= len) ++level;
    const auto& row = sparse_max[level];
    return std::max(row[lo], row[hi + 1 - (std::size_t{1} << level)]);
  }

  double eval(double s, double t) const {
    if (s == t) return 0.0;
    switch (kind) {
      case Kind::linear:
        return t - s;
      case Kind::power:
        return scale * std::pow(t - s, kappa);
      case Kind::besov_data: {
        if (std::isinf(theta)) return std::pow(besov_sup(s, t), exponent) * (t - s);
        double integral = besov_integral(s, t);
        if (integral <= 0.0) return 0.0;
        return std::pow(integral, exponent) * std::pow(t - s, 1.0 - exponent);
      }
      case Kind::tabulated: {
        double step = horizon / static_cast<double>(n);
        double x = s / step, y = t / step;
        auto i = std::min<std::size_t>(static_cast<std::size_t>(std::floor(x)), n - 1);
        auto j = std::min<std::size_t>(static_cast<std::size_t>(std::floor(y)), n - 1);
        double fx = x - static_cast<double>(i), fy = y - static_cast<double>(j);
        double v = (1 - fx) * (1 - fy) * tabulated_at(i, j) + fx * (1 - fy) * tabulated_at(i + 1, j) +
                   (1 - fx) * fy * tabulated_at(i, j + 1) + fx * fy * tabulated_at(i + 1, j + 1);
        return std::max(0.0, v);
      }
    }
    return 0.0;
  }
};

namespace {

void check_horizon(double horizon) {
  require(std::isfinite(horizon) && horizon > 0, ErrorCode::invalid_argument,
          "control horizon must be positive and finite");
}

}  // namespace

Control::Control(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

Control Control::linear(double horizon) {
  check_horizon(horizon);
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::linear;
  impl->horizon = horizon;
  return Control(impl);
}

Control Control::power(double horizon, double scale, double kappa) {
  check_horizon(horizon);
  require(scale > 0 && std::isfinite(scale), ErrorCode::invalid_argument, "power control: scale must be positive");
  require(kappa >= 1 && std::isfinite(kappa), ErrorCode::invalid_argument,
          "power control: kappa must be >= 1 for superadditivity");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::power;
  impl->horizon = horizon;
  impl->scale = scale;
  impl->kappa = kappa;
  return Control(impl);
}

Control Control::besov_data(double horizon, std::vector<double> profile_norms, double theta,
                            double hurst, double gamma) {
  check_horizon(horizon);
  require(!profile_norms.empty(), ErrorCode::invalid_argument, "besov_data control: empty profile");
  for (double v : profile_norms)
    require(std::isfinite(v) && v >= 0, ErrorCode::invalid_argument,
            "besov_data control: profile norms must be finite and nonnegative");
  require(theta > 1, ErrorCode::invalid_argument, "besov_data control: theta must exceed 1");
  require(hurst > 0 && hurst < 1, ErrorCode::invalid_argument, "besov_data control: H must lie in (0,1)");
  require(gamma >= 0, ErrorCode::invalid_argument, "besov_data control: gamma must be nonnegative");
  const double time_exp = 1.0 - hurst * gamma;
  require(time_exp > 0, ErrorCode::invalid_argument, "besov_data control: need 1 - H*gamma > 0");
  const double inv_theta = std::isinf(theta) ? 0.0 : 1.0 / theta;
  require(time_exp - inv_theta >= 0, ErrorCode::invalid_argument,
          "besov_data control: need 1 - H*gamma - 1/theta >= 0");

  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::besov_data;
  impl->horizon = horizon;
  impl->theta = theta;
  impl->hurst = hurst;
  impl->gamma = gamma;
  impl->profile = std::move(profile_norms);
  impl->cell = horizon / static_cast<double>(impl->profile.size());
  if (std::isinf(theta)) {
    impl->exponent = 1.0 / time_exp;
    const std::size_t m = impl->profile.size();
    impl->sparse_max.push_back(impl->profile);
    for (std::size_t len = 2; len <= m; len <<= 1) {
      const auto& prev = impl->sparse_max.back();
      std::vector<double> row(m - len + 1);
      for (std::size_t i = 0; i + len <= m; ++i) row[i] = std::max(prev[i], prev[i + len / 2]);
      impl->sparse_max.push_back(std::move(row));
    }
  } else {
    impl->exponent = 1.0 / (theta * time_exp);
    impl->prefix.assign(impl->profile.size() + 1, 0.0);
    for (std::size_t k = 0; k < impl->profile.size(); ++k)
      impl->prefix[k + 1] = impl->prefix[k] + impl->cell * std::pow(impl->profile[k], theta);
  }
  return Control(impl);
}

Control Control::tabulated(double horizon, std::size_t n, std::vector<double> values) {
  check_horizon(horizon);
  require(n >= 1, ErrorCode::invalid_argument, "tabulated control: need n >= 1");
  require(values.size() == (n + 1) * (n + 1), ErrorCode::invalid_argument,
          "tabulated control: expected (n+1)^2 values");
  for (std::size_t i = 0; i <= n; ++i) {
    require(values[i * (n + 1) + i] == 0.0, ErrorCode::invalid_argument,
            "tabulated control: diagonal must be zero");
    for (std::size_t j = i; j <= n; ++j) {
      double v = values[i * (n + 1) + j];
      require(std::isfinite(v) && v >= 0, ErrorCode::invalid_argument,
              "tabulated control: values must be finite and nonnegative");
    }
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::tabulated;
  impl->horizon = horizon;
  impl->n = n;
  impl->values = std::move(values);
  return Control(impl);
}

Control Control::tabulate(double horizon, std::size_t n, const std::function<double(double, double)>& fn) {
  check_horizon(horizon);
  require(n >= 1, ErrorCode::invalid_argument, "tabulated control: need n >= 1");
  std::vector<double> values((n + 1) * (n + 1), 0.0);
  const double step = horizon / static_cast<double>(n);
  for (std::size_t i = 0; i <= n; ++i)
    for (std::size_t j = i + 1; j <= n; ++j)
      values[i * (n + 1) + j] = fn(static_cast<double>(i) * step, static_cast<double>(j) * step);
  return tabulated(horizon, n, std::move(values));
}

Control::Kind Control::kind() const { return impl_->kind; }
double Control::horizon() const { return impl_->horizon; }
double Control::tolerance() const { return impl_->kind == Kind::tabulated ? 1e-9 : 1e-12; }

double Control::operator()(double s, double t) const {
  const double T = impl_->horizon;
  const double slack = 1e-12 * std::max(1.0, T);
  if (!(s >= -slack && t <= T + slack && s <= t + slack))
    fail(ErrorCode::domain, "control evaluated outside 0 <= s <= t <= T: (" + std::to_string(s) + ", " +
                                std::to_string(t) + ")");
  s = std::clamp(s, 0.0, T);
  t = std::clamp(t, s, T);
  return impl_->eval(s, t);
}

bool Control::has_closed_form_midpoint() const {
  return impl_->kind == Kind::linear || impl_->kind == Kind::power;
}

double Control::closed_form_midpoint(double s, double t) const {
  switch (impl_->kind) {
    case Kind::linear:
      return 0.5 * (s + t);
    case Kind::power:
      return s + (t - s) * std::pow(0.5, 1.0 / impl_->kappa);
    default:
      fail(ErrorCode::unsupported, "closed-form w-midpoint only exists for linear and power controls");
  }
}

const char* control_kind_name(Control::Kind kind) {
  switch (kind) {
    case Control::Kind::linear: return "linear";
    case Control::Kind::power: return "power";
    case Control::Kind::besov_data: return "besov_data";
    case Control::Kind::tabulated: return "tabulated";
  }
  return "unknown";
}

nlohmann::json Control::to_json() const {
  nlohmann::json doc;
  doc["kind"] = control_kind_name(impl_->kind);
  doc["T"] = impl_->horizon;
  switch (impl_->kind) {
    case Kind::linear:
      break;
    case Kind::power:
      doc["scale"] = impl_->scale;
      doc["kappa"] = impl_->kappa;
      break;
    case Kind::besov_data:
      if (std::isinf(impl_->theta))
        doc["theta"] = "inf";
      else
        doc["theta"] = impl_->theta;
      doc["hurst"] = impl_->hurst;
      doc["gamma"] = impl_->gamma;
      doc["profile"] = impl_->profile;
      break;
    case Kind::tabulated:
      doc["n"] = impl_->n;
      doc["values"] = impl_->values;
      break;
  }
  return doc;
}

Control Control::from_json(const nlohmann::json& doc) {
  try {
    require(doc.is_object(), ErrorCode::config, "control: expected a JSON object");
    const std::string kind = doc.at("kind").get<std::string>();
    const double T = doc.value("T", 1.0);
    if (kind == "linear") return linear(T);
    if (kind == "power") return power(T, doc.value("scale", 1.0), doc.at("kappa").get<double>());
    if (kind == "besov_data") {
      double theta = 0;
      const auto& th = doc.at("theta");
      if (th.is_string()) {
        require(th.get<std::string>() == "inf", ErrorCode::config, "control: theta must be a number or \"inf\"");
        theta = std::numeric_limits<double>::infinity();
      } else {
        theta = th.get<double>();
      }
      return besov_data(T, doc.at("profile").get<std::vector<double>>(), theta, doc.at("hurst").get<double>(),
                        doc.at("gamma").get<double>());
    }
    if (kind == "tabulated")
      return tabulated(T, doc.at("n").get<std::size_t>(), doc.at("values").get<std::vector<double>>());
    fail(ErrorCode::config, "control: unknown kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::config, std::string("control: malformed document: ") + e.what());
  }
}

Partition::Partition(std::vector<double> points) : points_(std::move(points)) {
  require(!points_.empty(), ErrorCode::invalid_argument, "partition needs at least one point");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    require(std::isfinite(points_[i]), ErrorCode::invalid_argument, "partition points must be finite");
    if (i > 0)
      require(points_[i] > points_[i - 1], ErrorCode::invalid_argument,
              "partition points must be strictly increasing");
  }
}

Partition Partition::from_sorted_with_repeats(std::span<const double> points) {
  std::vector<double> out;
  out.reserve(points.size());
  for (double p : points)
    if (out.empty() || p > out.back()) out.push_back(p);
  return Partition(std::move(out));
}

Partition Partition::uniform(double s, double t, std::size_t intervals) {
  require(intervals >= 1 && t > s, ErrorCode::invalid_argument, "uniform partition: need s < t and N >= 1");
  std::vector<double> pts(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i)
    pts[i] = s + (t - s) * static_cast<double>(i) / static_cast<double>(intervals);
  pts.back() = t;
  return Partition(std::move(pts));
}

double bisect_midpoint(const Control& c, double s, double t, double rel_tol) {
  require(s < t, ErrorCode::domain, "w-midpoint needs s < t");
  const double half = 0.5 * c(s, t);
  if (half <= 0.0) return s;
  const double tol = rel_tol * (t - s);
  double lo = s, hi = t;
  for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (c(s, mid) >= half)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double w_midpoint(const Control& c, double s, double t, double rel_tol) {
  require(s < t, ErrorCode::domain, "w-midpoint needs s < t");
  (void)c(s, t);  // domain check
  if (c.has_closed_form_midpoint()) return c.closed_form_midpoint(s, t);
  return bisect_midpoint(c, s, t, rel_tol);
}

DyadicTree dyadic_tree(const Control& c, double s, double t, int h, int h_max) {
  require(h >= 0, ErrorCode::invalid_argument, "dyadic level must be nonnegative");
  require(h <= h_max, ErrorCode::level_overflow,
          "dyadic level " + std::to_string(h) + " exceeds maximum " + std::to_string(h_max));
  require(s < t, ErrorCode::domain, "dyadic points need s < t");
  (void)c(s, t);
  DyadicTree tree;
  tree.s = s;
  tree.t = t;
  tree.levels.push_back({s, t});
  for (int k = 0; k < h; ++k) {
    const auto& prev = tree.levels.back();
    std::vector<double> next;
    next.reserve(2 * prev.size() - 1);
    for (std::size_t i = 0; i + 1 < prev.size(); ++i) {
      next.push_back(prev[i]);
      next.push_back(prev[i] < prev[i + 1] ? w_midpoint(c, prev[i], prev[i + 1]) : prev[i]);
    }
    next.push_back(prev.back());
    tree.levels.push_back(std::move(next));
  }
  return tree;
}

std::vector<double> dyadic_points(const Control& c, double s, double t, int h, int h_max) {
  require(h >= 0, ErrorCode::invalid_argument, "dyadic level must be nonnegative");
  require(h <= h_max, ErrorCode::level_overflow,
          "dyadic level " + std::to_string(h) + " exceeds maximum " + std::to_string(h_max));
  require(s < t, ErrorCode::domain, "dyadic points need s < t");
  (void)c(s, t);
  std::vector<double> pts{s, t};
  for (int k = 0; k < h; ++k) {
    std::vector<double> next;
    next.reserve(2 * pts.size() - 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      next.push_back(pts[i]);
      next.push_back(pts[i] < pts[i + 1] ? w_midpoint(c, pts[i], pts[i + 1]) : pts[i]);
    }
    next.push_back(pts.back());
    pts = std::move(next);
  }
  return pts;
}

Partition dyadic_partition(const Control& c, double s, double t, int h, int h_max) {
  auto pts = dyadic_points(c, s, t, h, h_max);
  return Partition::from_sorted_with_repeats(pts);
}

double mesh(const Control& c, const Partition& pi) {
  double best = 0.0;
  auto pts = pi.points();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) best = std::max(best, c(pts[i], pts[i + 1]));
  return best;
}

SuperadditivityReport check_superadditive(const Control& c, std::size_t grid_n) {
  require(grid_n >= 3, ErrorCode::invalid_argument, "check_superadditive: grid_n must be >= 3");
  const double T = c.horizon();
  std::vector<double> grid(grid_n);
  for (std::size_t i = 0; i < grid_n; ++i)
    grid[i] = T * static_cast<double>(i) / static_cast<double>(grid_n - 1);
  grid.back() = T;
  std::vector<double> w(grid_n * grid_n, 0.0);
  for (std::size_t i = 0; i < grid_n; ++i)
    for (std::size_t j = i; j < grid_n; ++j) w[i * grid_n + j] = c(grid[i], grid[j]);
  const double total = w[grid_n - 1];
  const double fallback = total > 0 ? total : 1.0;

  SuperadditivityReport report;
  report.tolerance = c.tolerance();
  report.max_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid_n; ++i)
    for (std::size_t k = i; k < grid_n; ++k) {
      const double outer = w[i * grid_n + k];
      const double scale = outer > 0 ? outer : fallback;
      for (std::size_t j = i; j <= k; ++j) {
        double excess = (w[i * grid_n + j] + w[j * grid_n + k] - outer) / scale;
        ++report.triples;
        if (excess > report.max_violation) {
          report.max_violation = excess;
          report.witness = {grid[i], grid[j], grid[k]};
        }
      }
    }
  return report;
}

bool is_strictly_increasing(const Control& c, std::size_t grid_n) {
  require(grid_n >= 2, ErrorCode::invalid_argument, "is_strictly_increasing: grid_n must be >= 2");
  const double T = c.horizon();
  std::vector<double> grid(grid_n);
  for (std::size_t i = 0; i < grid_n; ++i)
    grid[i] = T * static_cast<double>(i) / static_cast<double>(grid_n - 1);
  grid.back() = T;
  for (std::size_t i = 0; i < grid_n; ++i)
    for (std::size_t j = i + 1; j < grid_n; ++j) {
      double inner = c(grid[i], grid[j]);
      if (j + 1 < grid_n && !(inner < c(grid[i], grid[j + 1]))) return false;
      if (i > 0 && !(inner < c(grid[i - 1], grid[j]))) return false;
      if (!(inner > 0)) return false;
    }
  return true;
}

}  // namespace sewkit
