#include "sewkit/sewing.hpp"

#include <algorithm>

namespace sewkit {

RealVector& RealVector::operator+=(const RealVector& o) {
  if (data.empty()) data.assign(o.data.size(), 0.0);
  require(o.data.size() == data.size(), ErrorCode::invalid_argument, "RealVector size mismatch");
  for (std::size_t i = 0; i < data.size(); ++i) data[i] += o.data[i];
  return *this;
}

RealVector& RealVector::operator-=(const RealVector& o) {
  if (data.empty()) data.assign(o.data.size(), 0.0);
  require(o.data.size() == data.size(), ErrorCode::invalid_argument, "RealVector size mismatch");
  for (std::size_t i = 0; i < data.size(); ++i) data[i] -= o.data[i];
  return *this;
}

RealVector& RealVector::operator*=(double c) {
  for (double& x : data) x *= c;
  return *this;
}

double value_norm(const RealVector& v) {
  if (std::isinf(v.p)) {
    double best = 0;
    for (double x : v.data) best = std::max(best, std::abs(x));
    return best;
  }
  double s = 0;
  for (double x : v.data) s += std::pow(std::abs(x), v.p);
  return std::pow(s, 1.0 / v.p);
}

void GermBounds::validate() const {
  require(gamma1 >= 0 && gamma2 >= 0 && gamma3 >= 0, ErrorCode::invalid_argument,
          "germ bounds: Gamma constants must be nonnegative");
  require(eps1 > 0 && eps2 > 0 && eps3 > 0, ErrorCode::invalid_argument,
          "germ bounds: epsilon exponents must be positive");
  require(p_hat > 1 && p_hat <= 2, ErrorCode::invalid_argument, "germ bounds: p_hat must lie in (1,2]");
  require(m >= p_hat && n >= m, ErrorCode::invalid_argument, "germ bounds: need p_hat <= m <= n");
}

double rate_bound(const GermBounds& b, const Control& c, double s, double t, double mesh_w, double C) {
  b.validate();
  const double w = c(s, t);
  require(mesh_w >= 0 && mesh_w <= w * (1 + 1e-12) + 1e-300, ErrorCode::domain,
          "rate_bound: mesh must not exceed w(s,t)");
  return C * b.gamma1 * std::pow(mesh_w, b.eps1) * w + C * b.gamma2 * std::pow(mesh_w, b.eps2) * std::pow(w, 1.0 / b.p_hat);
}

namespace {
// Cauchy differences at this relative size are rounding noise.
constexpr double kRoundoff = 1e-12;
}  // namespace

bool trace_non_decaying(std::span<const TraceRow> trace) {
  std::vector<double> lv, lc;
  for (const auto& row : trace)
    if (row.level > 0 && row.cauchy_diff > kRoundoff * row.value_norm) {
      lv.push_back(row.level);
      lc.push_back(std::log2(row.cauchy_diff));
    }
  if (lv.size() < 2) return false;
  std::size_t keep = std::min<std::size_t>(4, lv.size());
  std::span<const double> x(lv.data() + lv.size() - keep, keep), y(lc.data() + lc.size() - keep, keep);
  return fit_line(x, y).slope >= 0.0;
}

double geometric_tail_factor(std::span<const TraceRow> trace) {
  if (trace.size() < 3) return 0.0;
  double last = trace[trace.size() - 1].cauchy_diff;
  double prev = trace[trace.size() - 2].cauchy_diff;
  if (!(prev > 0) || !(last > kRoundoff * trace.back().value_norm)) return 0.0;
  double r = last / prev;
  if (r >= 1.0) return 0.0;
  return r / (1.0 - r);
}

AllocationIdentity allocation_identity(const std::function<double(std::size_t, std::size_t)>& table,
                                       std::span<const double> points, const Control& c, int h_max) {
  AllocationIdentity out;
  if (points.size() < 2) return out;
  const std::size_t N = points.size() - 1;
  double scale = 0;
  for (std::size_t i = 0; i < N; ++i) {
    double a = table(i, i + 1);
    out.lhs += a;
    scale = std::max(scale, std::abs(a));
  }
  double whole = table(0, N);
  out.lhs -= whole;
  scale = std::max(scale, std::abs(whole));
  auto terms = allocate<double>(table, points, c, 0.0, h_max);
  for (const auto& term : terms) {
    out.rhs += term.value;
    out.deepest_level = std::max(out.deepest_level, term.level);
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = a + 1; b < 4; ++b) {
        std::size_t i = term.point_index[a], j = term.point_index[b];
        if (i < j) scale = std::max(scale, std::abs(table(i, j)));
      }
  }
  out.terms = terms.size();
  out.scale = std::max(scale, std::abs(out.lhs));
  out.relative_error = out.scale > 0 ? std::abs(out.lhs - out.rhs) / out.scale : 0.0;
  return out;
}

}  // namespace sewkit
