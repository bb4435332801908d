#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "sewkit/control.hpp"
#include "sewkit/error.hpp"
#include "sewkit/parallel.hpp"
#include "sewkit/stats.hpp"

namespace sewkit {

inline double value_norm(double x) { return std::abs(x); }

// Finite-dimensional value with an l^p norm.
struct RealVector {
  std::vector<double> data;
  double p = 2.0;

  RealVector() = default;
  explicit RealVector(std::size_t n, double p_norm = 2.0) : data(n, 0.0), p(p_norm) {}
  RealVector(std::vector<double> v, double p_norm) : data(std::move(v)), p(p_norm) {}

  RealVector& operator+=(const RealVector& o);
  RealVector& operator-=(const RealVector& o);
  RealVector& operator*=(double c);
};

double value_norm(const RealVector& v);

template <class V>
concept SewingValue = std::copyable<V> && requires(V a, const V& b, double c) {
  { a += b } -> std::same_as<V&>;
  { a -= b } -> std::same_as<V&>;
  { a *= c } -> std::same_as<V&>;
  { value_norm(b) } -> std::convertible_to<double>;
};

// A two-parameter process A_{s,t} for one sample-path context. The context is
// bound into the evaluator; `zero` is the additive identity of the right shape.
template <SewingValue V>
struct Germ {
  std::function<V(double, double)> eval;
  V zero{};

  V operator()(double s, double t) const { return eval(s, t); }
};

// Constants of the two moment conditions on delta A, the conditional-mean
// condition used for the martingale/drift split, and the moment indices.
struct GermBounds {
  double gamma1 = 0.0;
  double eps1 = 1.0;
  double gamma2 = 0.0;
  double eps2 = 1.0;
  double gamma3 = 0.0;
  double eps3 = 1.0;
  double p_hat = 2.0;
  double m = 2.0;
  double n = std::numeric_limits<double>::infinity();

  void validate() const;
};

// C*G1*mesh^e1*w(s,t) + C*G2*mesh^e2*w(s,t)^{1/p_hat}
double rate_bound(const GermBounds& b, const Control& c, double s, double t, double mesh_w, double C);

template <SewingValue V>
V delta(const Germ<V>& g, double s, double u, double t) {
  require(s <= u && u <= t, ErrorCode::domain, "delta needs s <= u <= t");
  V out = g(s, t);
  out -= g(s, u);
  out -= g(u, t);
  return out;
}

template <SewingValue V>
V riemann_sum(const Germ<V>& g, const Partition& pi) {
  V total = g.zero;
  auto pts = pi.points();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) total += g(pts[i], pts[i + 1]);
  return total;
}

struct TraceRow {
  int level = 0;
  double mesh_w = 0.0;
  double value_norm = 0.0;
  // ||A^{pi_h} - A^{pi_{h-1}}||; NaN at the coarsest level.
  double cauchy_diff = std::numeric_limits<double>::quiet_NaN();
};

template <SewingValue V>
struct SewResult {
  V value;         // Riemann sum on the finest w-dyadic partition
  V extrapolated;  // finest sum plus a geometric-tail estimate of the remainder
  std::vector<TraceRow> trace;
  bool non_decaying = false;
};

// True when the Cauchy differences of the last few levels fail to decrease.
bool trace_non_decaying(std::span<const TraceRow> trace);
// Multiplier r/(1-r) for the geometric remainder, 0 when not contracting.
double geometric_tail_factor(std::span<const TraceRow> trace);

// Riemann sums over the w-dyadic partitions of [0,t], levels 0..max_level.
template <SewingValue V>
SewResult<V> sew(const Germ<V>& g, const Control& c, double t, int max_level) {
  require(max_level >= 0, ErrorCode::invalid_argument, "sew: max_level must be >= 0");
  require(t > 0, ErrorCode::domain, "sew: need t > 0");
  DyadicTree tree = dyadic_tree(c, 0.0, t, max_level);
  SewResult<V> res{g.zero, g.zero, {}, false};
  V previous = g.zero;
  V last_diff = g.zero;
  for (int h = 0; h <= max_level; ++h) {
    Partition pi = Partition::from_sorted_with_repeats(tree.levels[static_cast<std::size_t>(h)]);
    V current = riemann_sum(g, pi);
    TraceRow row;
    row.level = h;
    row.mesh_w = mesh(c, pi);
    row.value_norm = value_norm(current);
    if (h > 0) {
      V diff = current;
      diff -= previous;
      row.cauchy_diff = value_norm(diff);
      last_diff = std::move(diff);
    }
    res.trace.push_back(row);
    previous = std::move(current);
  }
  res.value = previous;
  res.non_decaying = trace_non_decaying(res.trace);
  res.extrapolated = previous;
  double factor = geometric_tail_factor(res.trace);
  if (factor > 0) {
    V tail = last_diff;
    tail *= factor;
    res.extrapolated += tail;
  }
  return res;
}

template <SewingValue V>
struct DoobMeyerSums {
  V martingale;  // M^pi = sum (A - E_{t_i} A)
  V drift;       // J^pi = sum E_{t_i} A
};

// cond_mean(s,t) must return E_s A_{s,t} exactly for the germ family.
template <SewingValue V>
DoobMeyerSums<V> doob_meyer_sums(const Germ<V>& g, const std::function<V(double, double)>& cond_mean,
                                 const Partition& pi) {
  require(static_cast<bool>(cond_mean), ErrorCode::unsupported,
          "doob_meyer_sums: no conditional-mean oracle for this germ");
  DoobMeyerSums<V> out{g.zero, g.zero};
  auto pts = pi.points();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    V a = g(pts[i], pts[i + 1]);
    V e = cond_mean(pts[i], pts[i + 1]);
    a -= e;
    out.martingale += a;
    out.drift += e;
  }
  return out;
}

struct ConvergenceStudy {
  std::vector<int> levels;
  std::vector<double> mesh;
  std::vector<double> rms_error;
  // errors[k][ctx] = ||A^{pi_k} - reference(ctx)||
  std::vector<std::vector<double>> errors;
  double slope = std::numeric_limits<double>::quiet_NaN();
  double intercept = std::numeric_limits<double>::quiet_NaN();
  // Set when every error vanishes (or too few are nonzero to fit).
  bool degenerate = false;
  std::string note;
};

// Least-squares slope of log(RMS error) against log(mesh_w) over w-dyadic
// levels [level_min, level_max] of [0,t], across `contexts` sample paths.
template <SewingValue V>
ConvergenceStudy convergence_study(std::size_t contexts, const std::function<Germ<V>(std::size_t)>& germ_for,
                                   const std::function<V(std::size_t)>& reference_for, const Control& c,
                                   double t, int level_min, int level_max, unsigned workers = 1) {
  require(level_min >= 0 && level_max >= level_min, ErrorCode::invalid_argument,
          "convergence_study: bad level range");
  require(level_max - level_min + 1 >= 3, ErrorCode::degenerate,
          "convergence_study: need at least three levels for a fit");
  require(contexts >= 1, ErrorCode::invalid_argument, "convergence_study: need at least one context");
  DyadicTree tree = dyadic_tree(c, 0.0, t, level_max);
  ConvergenceStudy study;
  std::vector<Partition> parts;
  for (int h = level_min; h <= level_max; ++h) {
    parts.push_back(Partition::from_sorted_with_repeats(tree.levels[static_cast<std::size_t>(h)]));
    study.levels.push_back(h);
    study.mesh.push_back(mesh(c, parts.back()));
  }
  const std::size_t nl = parts.size();
  study.errors.assign(nl, std::vector<double>(contexts, 0.0));
  parallel_for(contexts, workers, [&](std::size_t ctx) {
    Germ<V> g = germ_for(ctx);
    V ref = reference_for(ctx);
    for (std::size_t k = 0; k < nl; ++k) {
      V diff = riemann_sum(g, parts[k]);
      diff -= ref;
      study.errors[k][ctx] = value_norm(diff);
    }
  });
  std::size_t nonzero = 0;
  for (std::size_t k = 0; k < nl; ++k) {
    study.rms_error.push_back(rms(study.errors[k]));
    if (study.rms_error.back() > 0) ++nonzero;
  }
  if (nonzero < 2) {
    study.degenerate = true;
    study.note = nonzero == 0 ? "degenerate: exact" : "degenerate: too few nonzero errors";
    return study;
  }
  LineFit fit = fit_loglog(study.mesh, study.rms_error);
  study.slope = fit.slope;
  study.intercept = fit.intercept;
  return study;
}

// Norms of the Riemann sums of R over w-dyadic partitions of [0,t] for
// levels 0..max_level. For R small in the sense of the uniqueness criterion
// these decay to zero.
template <SewingValue V>
std::vector<double> uniqueness_probe(const Germ<V>& r, const Control& c, double t, int max_level) {
  DyadicTree tree = dyadic_tree(c, 0.0, t, max_level);
  std::vector<double> out;
  for (const auto& level : tree.levels)
    out.push_back(value_norm(riemann_sum(r, Partition::from_sorted_with_repeats(level))));
  return out;
}

template <SewingValue V>
struct AllocationTerm {
  int level = 0;
  std::size_t index = 0;
  std::array<double, 4> points{};
  // indices of the four points in the input point list
  std::array<std::size_t, 4> point_index{};
  V value{};
};

// Allocates the points t_0 < ... < t_N into the w-dyadic subintervals of
// [t_0, t_N]; each term records the correction R = A(s1,s2) + A(s2,s3) +
// A(s3,s4) - A(s1,s4) incurred when two sibling groups are merged. A(i,j) is
// the germ on the pair (t_i, t_j), i < j.
template <SewingValue V>
std::vector<AllocationTerm<V>> allocate(const std::function<V(std::size_t, std::size_t)>& table,
                                        std::span<const double> points, const Control& c, V zero = V{},
                                        int h_max = kDefaultMaxDyadicLevel) {
  for (std::size_t i = 1; i < points.size(); ++i)
    require(points[i] > points[i - 1], ErrorCode::invalid_argument, "allocate: points must be strictly increasing");
  std::vector<AllocationTerm<V>> terms;
  if (points.size() < 3) return terms;
  auto pair_value = [&](std::size_t i, std::size_t j) { return i == j ? zero : table(i, j); };

  struct Node {
    int level;
    std::size_t index;
    double a, b;
    std::size_t lo, hi;  // point indices [lo, hi)
  };
  std::vector<Node> stack{{0, 0, points.front(), points.back(), 0, points.size()}};
  while (!stack.empty()) {
    Node node = stack.back();
    stack.pop_back();
    if (node.hi - node.lo < 2) continue;
    require(node.level < h_max, ErrorCode::level_overflow,
            "allocate: points not separated by w-dyadic intervals up to the maximum level");
    double mid = node.a < node.b ? w_midpoint(c, node.a, node.b) : node.a;
    std::size_t split = node.lo;
    while (split < node.hi && points[split] < mid) ++split;
    if (split > node.lo && split < node.hi) {
      AllocationTerm<V> term;
      term.level = node.level;
      term.index = node.index;
      term.point_index = {node.lo, split - 1, split, node.hi - 1};
      for (int k = 0; k < 4; ++k) term.points[static_cast<std::size_t>(k)] = points[term.point_index[static_cast<std::size_t>(k)]];
      const auto& ix = term.point_index;
      V r = pair_value(ix[0], ix[1]);
      r += pair_value(ix[1], ix[2]);
      r += pair_value(ix[2], ix[3]);
      r -= pair_value(ix[0], ix[3]);
      term.value = std::move(r);
      terms.push_back(std::move(term));
    }
    stack.push_back({node.level + 1, 2 * node.index + 1, mid, node.b, split, node.hi});
    stack.push_back({node.level + 1, 2 * node.index, node.a, mid, node.lo, split});
  }
  return terms;
}

struct AllocationIdentity {
  double lhs = 0.0;    // sum_i A(t_i,t_{i+1}) - A(t_0,t_N)
  double rhs = 0.0;    // sum of allocation terms
  double scale = 0.0;  // max(|lhs|, max |A|) used for the relative error
  double relative_error = 0.0;
  std::size_t terms = 0;
  int deepest_level = -1;
};

// Both sides of the allocation identity for a real-valued table.
AllocationIdentity allocation_identity(const std::function<double(std::size_t, std::size_t)>& table,
                                       std::span<const double> points, const Control& c,
                                       int h_max = kDefaultMaxDyadicLevel);

}  // namespace sewkit
