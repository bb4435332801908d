// Runs every acceptance criterion against the library and prints one verdict
// line per criterion. Statistics and reference values are computed here.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "sewkit/control.hpp"
#include "sewkit/fbm.hpp"
#include "sewkit/functionals.hpp"
#include "sewkit/kolmogorov.hpp"
#include "sewkit/mtype.hpp"
#include "sewkit/random.hpp"
#include "sewkit/sewing.hpp"
#include "sewkit/spectral.hpp"

using namespace sewkit;

namespace {

constexpr std::uint64_t kSeed = 42;

double slope_of(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return slope_of(lx, ly);
}

double avg(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double std_err(const std::vector<double>& v) {
  const double m = avg(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

double root_mean_square(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s / static_cast<double>(v.size()));
}

std::vector<double> random_profile(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 2.0);
  std::vector<double> out(n);
  for (double& v : out) v = u(rng);
  return out;
}

struct Verdict {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Verdict allocation() {
  std::mt19937_64 rng(kSeed);
  std::uniform_int_distribution<std::size_t> size(3, 64);
  std::uniform_real_distribution<double> unif;
  std::normal_distribution<double> normal;
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Control c = trial % 3 == 0   ? Control::linear(1.0)
                : trial % 3 == 1 ? Control::power(1.0, 1.0, 2.0)
                                 : Control::besov_data(1.0, random_profile(32, rng), 2.0, 0.25, 1.0);
    const std::size_t n = size(rng);
    std::vector<double> pts(n);
    for (double& p : pts) p = unif(rng);
    std::sort(pts.begin(), pts.end());
    std::vector<double> table(n * n);
    double scale = 0;
    for (double& v : table) {
      v = normal(rng);
      scale = std::max(scale, std::abs(v));
    }
    auto terms = allocate<double>([&](std::size_t i, std::size_t j) { return table[i * n + j]; }, pts, c, 0.0, 200);
    double lhs = -table[n - 1], rhs = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) lhs += table[i * n + i + 1];
    for (const auto& t : terms) rhs += t.value;
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(scale, std::abs(lhs)));
  }
  return {1, "allocation identity", worst <= 1e-12, fmt("max relative error %.3g over 200 tables", worst)};
}

Verdict dyadic_bound() {
  std::mt19937_64 rng(kSeed);
  std::vector<Control> controls{Control::linear(1.0), Control::power(1.0, 1.0, 2.0),
                                Control::besov_data(1.0, random_profile(64, rng), 2.0, 0.25, 1.0),
                                Control::tabulate(1.0, 64, [](double s, double t) { return 2 * (t - s); })};
  double worst = -1;
  for (const auto& c : controls)
    for (auto [s, t] : {std::pair{0.0, 1.0}, {0.2, 0.9}}) {
      DyadicTree tree = dyadic_tree(c, s, t, 12);
      const double total = c(s, t);
      for (int h = 0; h <= 12; ++h) {
        const auto& pts = tree.levels[static_cast<std::size_t>(h)];
        if (pts.size() != (std::size_t{1} << h) + 1) return {2, "dyadic bound", false, "wrong point count"};
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
          worst = std::max(worst, (c(pts[i], pts[i + 1]) - std::ldexp(total, -h)) / total);
      }
    }
  return {2, "dyadic bound", worst <= 1e-9, fmt("max relative slack %.3g up to level 12", worst)};
}

Verdict fbm_structure() {
  const std::size_t N = 100000;
  FbmParams bp;
  bp.hurst = 0.5;
  bp.dim = 2;
  bp.steps = 16;
  FbmSimulator bm(bp);
  const std::vector<std::array<double, 2>> pairs{{0.25, 0.25}, {0.25, 0.5}, {0.5, 0.75},
                                                 {0.25, 1.0},  {0.75, 1.0}, {1.0, 1.0}};
  std::vector<double> acc(pairs.size(), 0.0);
  for (std::size_t k = 0; k < N; ++k) {
    FbmPath p = bm.simulate_stream(kSeed, k);
    for (std::size_t a = 0; a < pairs.size(); ++a)
      acc[a] += p.value_at(0, pairs[a][0]) * p.value_at(0, pairs[a][1]);
  }
  double worst_cov = 0;
  for (std::size_t a = 0; a < pairs.size(); ++a) {
    const double expected = std::min(pairs[a][0], pairs[a][1]);
    worst_cov = std::max(worst_cov, std::abs(acc[a] / N - expected) / expected);
  }

  const std::vector<std::array<double, 2>> uv{{0.25, 0.5}, {0.5, 1.0}, {0.0, 1.0}};
  double worst_z = 0;
  const std::vector<double> hursts{0.25, 0.5, 0.75};
  for (std::size_t hi = 0; hi < hursts.size(); ++hi) {
    const double H = hursts[hi];
    FbmParams fp;
    fp.hurst = H;
    fp.steps = 32;
    FbmSimulator sim(fp);
    std::vector<std::vector<double>> sq(uv.size(), std::vector<double>(N));
    for (std::size_t k = 0; k < N; ++k) {
      FbmPath p = sim.simulate_stream(kSeed + 1 + hi, k);
      for (std::size_t a = 0; a < uv.size(); ++a) {
        const double r = p.value_at(0, uv[a][1]) - p.conditional_mean_at(0, uv[a][0], uv[a][1]);
        sq[a][k] = r * r;
      }
    }
    for (std::size_t a = 0; a < uv.size(); ++a) {
      const double expected = std::pow(uv[a][1] - uv[a][0], 2 * H) / (2 * H);
      worst_z = std::max(worst_z, std::abs(avg(sq[a]) - expected) / std_err(sq[a]));
    }
  }
  return {3, "fbm structure", worst_cov <= 0.02 && worst_z <= 3,
          fmt("max covariance relative error %.4f (<= 0.02), max rho |z| %.2f (<= 3)", worst_cov, worst_z)};
}

Verdict ito() {
  const std::size_t paths = 2000;
  const int lmin = 4, lmax = 10;
  FbmParams fp;
  fp.hurst = 0.5;
  fp.steps = std::size_t{1} << lmax;
  FbmSimulator sim(fp);
  std::vector<std::vector<double>> err(lmax - lmin + 1, std::vector<double>(paths));
  for (std::size_t k = 0; k < paths; ++k) {
    FbmPath p = sim.simulate_stream(kSeed, k);
    const double b1 = p.values(0).back();
    const double limit = (b1 * b1 - 1) / 2;
    for (int h = lmin; h <= lmax; ++h) {
      const std::size_t stride = fp.steps >> h;
      double sum = 0;
      for (std::size_t j = 0; j < fp.steps; j += stride) sum += p.value(0, j) * (p.value(0, j + stride) - p.value(0, j));
      err[static_cast<std::size_t>(h - lmin)][k] = sum - limit;
    }
  }
  std::vector<double> mesh, rmse;
  for (int h = lmin; h <= lmax; ++h) {
    mesh.push_back(std::ldexp(1.0, -h));
    rmse.push_back(root_mean_square(err[static_cast<std::size_t>(h - lmin)]));
  }
  const double slope = loglog_slope(mesh, rmse);
  const double m = avg(err.back()), se = std_err(err.back());
  return {4, "ito sewing", std::abs(m) <= 3 * se && std::abs(slope - 0.5) <= 0.15,
          fmt("finest mean error %.3g vs 3 SE %.3g, slope %.4f (0.5 +- 0.15)", m, 3 * se, slope)};
}

Verdict doob_meyer() {
  FbmParams fp;
  fp.hurst = 0.5;
  fp.steps = 1024;
  FbmSimulator sim(fp);
  std::mt19937_64 rng(kSeed);
  double worst = 0;
  for (std::size_t k = 0; k < 20; ++k) {
    FbmPath p = sim.simulate_stream(kSeed, k);
    Germ<double> g{[&](double s, double t) {
                     const double bs = p.value_at(0, s), bt = p.value_at(0, t);
                     return bt * bt - bs * bs;
                   },
                   0.0};
    // E_s B_t^2 = B_s^2 + (t - s) for Brownian motion.
    auto cond = [&](double s, double t) {
      const double m = p.conditional_mean_at(0, s, t);
      worst = std::max(worst, std::abs(m - p.value_at(0, s)));
      return t - s;
    };
    std::vector<Partition> parts;
    for (int h = 0; h <= 10; ++h) parts.push_back(Partition::uniform(0, 1, std::size_t{1} << h));
    std::uniform_int_distribution<std::size_t> node(1, 1023);
    std::vector<double> pts{0.0, 1.0};
    for (int i = 0; i < 50; ++i) pts.push_back(static_cast<double>(node(rng)) / 1024);
    std::sort(pts.begin(), pts.end());
    parts.push_back(Partition::from_sorted_with_repeats(pts));
    const double b1 = p.values(0).back();
    for (const auto& pi : parts) {
      auto sums = doob_meyer_sums<double>(g, cond, pi);
      worst = std::max({worst, std::abs(sums.drift - 1.0), std::abs(sums.martingale - (b1 * b1 - 1)),
                        std::abs(sums.martingale + sums.drift - riemann_sum(g, pi))});
    }
  }
  return {5, "doob-meyer sums", worst <= 1e-12, fmt("max deviation %.3g over 20 paths x 12 partitions", worst)};
}

Verdict young() {
  const double two_pi = 2 * std::numbers::pi;
  Germ<double> g{[&](double s, double t) { return std::cos(two_pi * s) * (std::exp(t) - std::exp(s)); }, 0.0};
  const double exact = (std::numbers::e - 1) / (1 + two_pi * two_pi);
  Control c = Control::linear(1.0);
  auto res = sew(g, c, 1.0, 12);
  std::vector<double> mesh, err;
  for (int h = 4; h <= 12; ++h) {
    mesh.push_back(std::ldexp(1.0, -h));
    err.push_back(std::abs(riemann_sum(g, Partition::uniform(0, 1, std::size_t{1} << h)) - exact));
  }
  const double slope = loglog_slope(mesh, err);
  const double limit_err = std::abs(res.extrapolated - exact);
  return {6, "young sewing", slope >= 0.85 && limit_err <= 1e-6,
          fmt("slope %.4f (>= 0.85), limit error %.3g (<= 1e-6)", slope, limit_err)};
}

Verdict martingale_type() {
  double worst = 0;
  std::vector<double> ln, lr;
  for (std::size_t N = 1; N <= 16; ++N) {
    auto f = TreeMartingale::sign_martingale(N, 1.5);
    worst = std::max(worst, std::abs(type_ratio(f, 1.5, 2.0) - 1));
    if (N % 2 == 0) {
      ln.push_back(std::log(static_cast<double>(N)));
      lr.push_back(std::log(type_ratio(f, 2.0, 2.0)));
    }
  }
  const double slope = slope_of(ln, lr);

  auto h = TreeMartingale::random(12, 4, 2.0, kSeed, true);
  auto sq = [&](std::size_t level, std::size_t i) {
    double s = 0;
    for (double x : h.node(level, i)) s += x * x;
    return s;
  };
  const std::size_t leaves = std::size_t{1} << 12;
  double top = 0, parts = sq(0, 0);
  for (std::size_t i = 0; i < leaves; ++i) top += sq(12, i) / static_cast<double>(leaves);
  for (std::size_t n = 1; n <= 12; ++n) {
    const std::size_t m = std::size_t{1} << n;
    for (std::size_t i = 0; i < m; ++i) {
      double d = 0;
      auto a = h.node(n, i), b = h.node(n - 1, i / 2);
      for (std::size_t c = 0; c < 4; ++c) d += (a[c] - b[c]) * (a[c] - b[c]);
      parts += d / static_cast<double>(m);
    }
  }
  const double gap = std::abs(top - parts) / top;
  return {7, "martingale type", worst <= 1e-12 && std::abs(slope - 1.0 / 6) <= 0.05 && gap <= 1e-12,
          fmt("max |ratio - 1| %.3g, exponent-2 slope %.5f (1/6 +- 0.05), pythagorean gap %.3g", worst, slope, gap)};
}

Verdict conditional_doob() {
  const std::vector<std::size_t> depths{4, 8, 12}, dims{1, 2, 3, 4};
  const std::vector<double> ps{1.5, 2, 3}, drifts{0, 0.1};
  std::vector<double> cmax(depths.size(), 0.0);
  double split = 0;
  for (std::size_t s = 0; s < 100; ++s) {
    const std::size_t a = s % depths.size();
    const double p = ps[(s / 3) % 3];
    const std::size_t dim = dims[(s / 9) % 4];
    const double drift = drifts[(s / 36) % 2];
    TreeSequence seq = random_tree_sequence(2, depths[a], dim, p, drift, stream_seed(kSeed, 0xD00B0000 + s));
    cmax[a] = std::max(cmax[a], doob_terms(seq, std::min(2.0, p), 2.0, 4.0).minimal_constant());
    split = std::max(split, doob_split_error(seq));
  }
  const double lo = *std::min_element(cmax.begin(), cmax.end()), hi = *std::max_element(cmax.begin(), cmax.end());
  std::vector<double> n(depths.begin(), depths.end());
  const double slope = lo > 0 ? loglog_slope(n, cmax) : std::nan("");
  const bool ok = std::isfinite(hi) && lo > 0 && hi / lo < 2 && std::abs(slope) <= 0.1 && split <= 1e-12;
  return {8, "conditional doob inequality", ok,
          fmt("C per depth %.4f %.4f %.4f, spread %.3f (< 2), slope %.4f (+- 0.1)", cmax[0], cmax[1], cmax[2],
              hi / lo, slope)};
}

Verdict harmonic_analysis() {
  // Plane-wave heat decay.
  GridSpec hs{1, 256, 4 * std::numbers::pi};
  const double lambda = 4;
  auto wave = GridFunction::plane_wave(hs, {lambda, 0.0});
  std::vector<double> x, y;
  for (double kappa : {0.0, 1.0 / 64, 1.0 / 32, 1.0 / 16, 1.0 / 8, 1.0 / 4}) {
    x.push_back(kappa * lambda * lambda);
    y.push_back(std::log(lp_norm(heat_convolve(wave, kappa), 2) / lp_norm(wave, 2)));
  }
  const double c_hat = -slope_of(x, y);

  // Bernstein ratio under lambda-doubling, with the period scaled so each band
  // holds the same number of modes.
  std::vector<double> lams{4, 8, 16}, ratios;
  for (std::size_t i = 0; i < lams.size(); ++i) {
    GridSpec bs{1, 512, std::numbers::pi * 64 / lams[i]};
    ratios.push_back(bernstein_check(bs, lams[i], 1, 4, 4, 64, stream_seed(kSeed, 0xBE000 + i)).max_ratio);
  }
  const double bslope = loglog_slope(lams, ratios);

  // Pag statistic across grid sizes.
  const int max_j = 5;
  std::vector<double> kappas;
  for (int e = 2 * max_j + 4; e >= 0; --e) kappas.push_back(std::ldexp(1.0, -e));
  double variation = 0;
  for (std::size_t f = 0; f < 8; ++f) {
    std::vector<double> sup;
    for (std::size_t n : {1024u, 2048u, 4096u}) {
      GridSpec ps{1, n, 8.0};
      auto g = random_multi_block(ps, 0.0, max_j, 3, stream_seed(kSeed, 0xFA6000 + f));
      sup.push_back(pag_check(g, 0.0, 0.5, 2, 2, kappas).sup_stat);
    }
    variation = std::max(variation, *std::max_element(sup.begin(), sup.end()) / *std::min_element(sup.begin(), sup.end()) - 1);
  }
  return {9, "heat, bernstein and pag checks",
          std::abs(c_hat - 0.5) <= 1e-6 && std::abs(bslope) <= 0.05 && variation < 0.2,
          fmt("c_hat %.9f (0.5 +- 1e-6), bernstein slope %.4f (+- 0.05), pag variation %.3g (< 0.2)", c_hat, bslope,
              variation)};
}

Verdict functional_rate() {
  TimeProfile f;
  f.kind = TimeProfile::Kind::besov_random;
  f.max_block = 1;
  f.waves = 2;
  f.seed = 7;
  GridSpec spec{1, 1024, 8.0};
  const std::size_t paths = 500, steps = 1024;
  const int lmin = 3, lmax = 8;
  std::string detail;
  bool ok = true;
  const std::vector<double> hursts{0.25, 0.5};
  for (std::size_t hi = 0; hi < hursts.size(); ++hi) {
    FbmParams fp;
    fp.hurst = hursts[hi];
    fp.steps = steps;
    FbmSimulator sim(fp);
    std::vector<std::vector<double>> err(lmax - lmin + 1, std::vector<double>(paths));
    for (std::size_t k = 0; k < paths; ++k) {
      FbmPath path = sim.simulate_stream(kSeed + hi, k);
      FunctionalGerm germ(f, spec, path);
      const ModalField ref = germ.reference(steps);
      for (int h = lmin; h <= lmax; ++h) {
        ModalField d = germ.riemann(Partition::uniform(0, 1, std::size_t{1} << h));
        d -= ref;
        err[static_cast<std::size_t>(h - lmin)][k] = value_norm(d);
      }
    }
    std::vector<double> mesh, rmse;
    for (int h = lmin; h <= lmax; ++h) {
      mesh.push_back(std::ldexp(1.0, -h));
      rmse.push_back(root_mean_square(err[static_cast<std::size_t>(h - lmin)]));
    }
    const double slope = loglog_slope(mesh, rmse);
    const std::vector<double> fm(mesh.end() - 3, mesh.end()), fr(rmse.end() - 3, rmse.end());
    const double fine = loglog_slope(fm, fr);
    const double predicted = std::min(0.5 + hursts[hi], 1.0);
    ok = ok && slope > 0 && std::abs(slope - fine) <= 0.15;
    detail += fmt("H=%.2f slope %.4f fine %.4f predicted %.2f%s; ", hursts[hi], slope, fine, predicted,
                  std::abs(slope - predicted) <= 0.15 ? " (within)" : " (outside)");
  }
  detail.resize(detail.size() - 2);
  return {10, "functional rate", ok, detail};
}

Verdict regularity() {
  // gamma_max = (1/H)(1 - 1/min(2, theta, p, q)) = 1 at H = 1/2, theta = p = q = 2.
  const double gamma_max = (1 / 0.5) * (1 - 1.0 / 2);
  RegularityProbeConfig cfg;
  cfg.profile.kind = TimeProfile::Kind::dirac;
  cfg.fbm.hurst = 0.5;
  cfg.fbm.steps = 16384;
  cfg.half_period = 8;
  cfg.spatial_n = {128, 256, 512};
  cfg.gammas = {0.7 * gamma_max, 1.3 * gamma_max};
  cfg.besov = {-0.51, 2, 2};
  cfg.moment = 2;
  cfg.paths = 40;
  cfg.seed = kSeed;
  RegularityProbeReport rep = regularity_probe(cfg);
  std::vector<double> ln;
  for (std::size_t n : cfg.spatial_n) ln.push_back(std::log2(static_cast<double>(n)));
  std::vector<double> slopes;
  for (const auto& row : rep.stat) {
    std::vector<double> l;
    for (double v : row) l.push_back(std::log2(v));
    slopes.push_back(slope_of(ln, l));
  }
  const bool budget_ok = std::abs(regularity_budget(0.5, 1, 2, -0.51, 2, 2).gamma_max - gamma_max) <= 1e-15;
  return {11, "regularity threshold", budget_ok && std::abs(slopes[0]) <= 0.1 && slopes[1] >= 0.15,
          fmt("gamma_max %.3f, slope at 0.7 gamma_max %.4f (stable, |.| <= 0.1), at 1.3 gamma_max %.4f (>= 0.15)",
              gamma_max, slopes[0], slopes[1])};
}

Verdict occupation() {
  FbmParams fp;
  fp.hurst = 0.5;
  fp.steps = 4096;
  FbmSimulator sim(fp);
  GridSpec spec{1, 4096, 8.0};
  TimeProfile bump;
  bump.kind = TimeProfile::Kind::gaussian_bump;
  bump.sigma = 0.5;
  TimeProfile one;
  double worst_bump = 0, worst_one = 0;
  for (std::size_t k = 0; k < 8; ++k) {
    FbmPath path = sim.simulate_stream(kSeed, k);
    Partition pi = Partition::uniform(0, 1, 4096);
    double direct = 0;
    for (std::size_t j = 0; j < 4096; ++j) {
      const double b = path.value(0, j);
      direct += path.dt() * std::exp(-b * b / (2 * 0.25));
    }
    worst_bump = std::max(worst_bump, std::abs(occupation_check(path, bump, spec, pi).pairing - direct) / direct);
    worst_one = std::max(worst_one, std::abs(occupation_check(path, one, spec, pi).pairing - 1.0));
  }
  return {12, "occupation identity", worst_bump < 5e-2 && worst_one < 1e-10,
          fmt("max bump residual %.3g (< 5e-2), max mass residual %.3g (< 1e-10)", worst_bump, worst_one)};
}

// sup over levels h <= top of max |x_t - x_s| / (t - s)^beta, with (s,t)
// adjacent or two apart on the grid of spacing 2^-h.
double modulus(const std::vector<double>& x, int finest, int top, double beta) {
  double best = 0;
  for (int h = 0; h <= top; ++h) {
    const std::size_t stride = std::size_t{1} << (finest - h);
    const std::size_t cells = std::size_t{1} << h;
    for (std::size_t gap = 1; gap <= std::min<std::size_t>(2, cells); ++gap) {
      const double scale = std::pow(std::ldexp(static_cast<double>(gap), -h), -beta);
      for (std::size_t i = 0; i + gap <= cells; ++i)
        best = std::max(best, std::abs(x[(i + gap) * stride] - x[i * stride]) * scale);
    }
  }
  return best;
}

Verdict kolmogorov() {
  const int finest = 12;
  const std::vector<int> levels{8, 10, 12};
  const std::vector<double> betas{0.3, 0.45};
  FbmParams fp;
  fp.hurst = 0.5;
  fp.steps = std::size_t{1} << finest;
  FbmSimulator sim(fp);
  DyadicPairs pairs(Control::linear(1.0), 1.0, finest);
  std::vector<std::vector<double>> moments(betas.size(), std::vector<double>(levels.size(), 0.0));
  double disagreement = 0;
  const std::size_t paths = 500;
  for (std::size_t k = 0; k < paths; ++k) {
    FbmPath p = sim.simulate_stream(kSeed, k);
    std::vector<double> x(p.values(0).begin(), p.values(0).end());
    for (std::size_t b = 0; b < betas.size(); ++b) {
      for (std::size_t l = 0; l < levels.size(); ++l)
        moments[b][l] += std::pow(modulus(x, finest, levels[l], betas[b]), 8) / static_cast<double>(paths);
      disagreement = std::max(disagreement, std::abs(modulus(x, finest, finest, betas[b]) -
                                                     modulus_statistic(x, pairs, betas[b])));
    }
  }
  std::vector<double> lv(levels.begin(), levels.end()), slopes;
  for (auto& row : moments) {
    std::vector<double> ln;
    for (double m : row) ln.push_back(std::log(std::pow(m, 1.0 / 8)));
    slopes.push_back(slope_of(lv, ln));
  }
  return {13, "kolmogorov modulus", std::abs(slopes[0]) <= 0.0025 && slopes[1] >= 0.005 && disagreement <= 1e-9,
          fmt("beta=0.3 slope %.5f (stable, |.| <= 0.0025), beta=0.45 slope %.5f (upward, >= 0.005)", slopes[0],
              slopes[1])};
}

}  // namespace

int main() {
  const std::vector<std::function<Verdict()>> checks{allocation,      dyadic_bound, fbm_structure, ito,
                                                     doob_meyer,      young,        martingale_type,
                                                     conditional_doob, harmonic_analysis, functional_rate,
                                                     regularity,      occupation,   kolmogorov};
  int failures = 0;
  for (const auto& check : checks) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {0, "exception", false, e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  [%2d] %s: %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", v.id, v.name.c_str(), v.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !v.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(checks.size()) - failures, checks.size());
  return failures == 0 ? 0 : 1;
}
