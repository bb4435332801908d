#include <algorithm>
#include <cmath>

#include "experiments/experiments.hpp"
#include "sewkit/error.hpp"
#include "sewkit/fbm.hpp"
#include "sewkit/parallel.hpp"
#include "sewkit/stats.hpp"

namespace sewkit::exp {

namespace {

using Pairs = std::vector<std::array<double, 2>>;

// Exact variance of B_T implied by the discrete kernels.
double discrete_variance(const FbmKernels& k) {
  const std::size_t n = k.params.steps, P = k.past_cells;
  const double dt = k.params.dt();
  if (k.brownian) return dt * static_cast<double>(n);
  double v = 0;
  for (std::size_t q = 1; q <= P; ++q) {
    const double w = k.past_avg[n + q] - k.past_avg[q];
    v += w * w;
  }
  for (std::size_t m = 1; m <= n; ++m) v += k.future[m] * k.future[m];
  return v * dt;
}

}  // namespace

json fbm_check_defaults() {
  return {
      {"paths", std::size_t{100000}},
      {"covariance",
       {{"steps", std::size_t{16}},
        {"pairs", Pairs{{0.25, 0.25}, {0.25, 0.5}, {0.5, 0.75}, {0.25, 1.0}, {0.75, 1.0}, {1.0, 1.0}}},
        {"tolerance", 0.02}}},
      {"rho",
       {{"hursts", std::vector<double>{0.25, 0.5, 0.75}},
        {"steps", std::size_t{32}},
        {"past", 0.0},
        {"pairs", Pairs{{0.25, 0.5}, {0.5, 1.0}, {0.0, 1.0}}},
        {"z_max", 3.0}}},
  };
}

Output run_fbm_check(const json& cfg, const RunOptions& opt) {
  Output out;
  const auto N = cfg["paths"].get<std::size_t>();
  require(N >= 10, ErrorCode::config, "config.paths must be >= 10");
  out.results.header = {"check", "hurst", "s", "t", "estimate", "expected", "standard_error", "z", "relative_error"};

  // Covariance and coordinate independence of Brownian motion.
  const auto& cov = cfg["covariance"];
  const auto cov_pairs = cov["pairs"].get<Pairs>();
  const double cov_tol = cov["tolerance"].get<double>();
  FbmParams bp;
  bp.hurst = 0.5;
  bp.dim = 2;
  bp.steps = cov["steps"].get<std::size_t>();
  FbmSimulator bm(bp);
  std::vector<std::vector<double>> prod(cov_pairs.size(), std::vector<double>(N));
  std::vector<double> cross(N);
  parallel_for(N, opt.workers, [&](std::size_t k) {
    FbmPath p = bm.simulate_stream(opt.seed, k);
    for (std::size_t a = 0; a < cov_pairs.size(); ++a)
      prod[a][k] = p.value_at(0, cov_pairs[a][0]) * p.value_at(0, cov_pairs[a][1]);
    cross[k] = p.values(0).back() * p.values(1).back();
  });
  double worst_cov = 0;
  for (std::size_t a = 0; a < cov_pairs.size(); ++a) {
    const double s = cov_pairs[a][0], t = cov_pairs[a][1];
    const double est = mean(prod[a]), se = standard_error(prod[a]), expected = std::min(s, t);
    const double rel = std::abs(est - expected) / expected;
    worst_cov = std::max(worst_cov, rel);
    out.results.add({"covariance", "0.5", num(s), num(t), num(est), num(expected), num(se), num((est - expected) / se),
                     num(rel)});
  }
  const double cross_est = mean(cross), cross_se = standard_error(cross);
  out.results.add({"cross_covariance", "0.5", "1", "1", num(cross_est), "0", num(cross_se), num(cross_est / cross_se),
                   "nan"});

  // Conditional variance rho, self-similarity and truncation bias.
  const auto& rc = cfg["rho"];
  const auto hursts = rc["hursts"].get<std::vector<double>>();
  const auto rho_pairs = rc["pairs"].get<Pairs>();
  const double z_max = rc["z_max"].get<double>();
  double worst_z = 0;
  json bias = json::array();
  std::vector<PlotSeries> series;
  for (std::size_t hi = 0; hi < hursts.size(); ++hi) {
    FbmParams fp;
    fp.hurst = hursts[hi];
    fp.steps = rc["steps"].get<std::size_t>();
    fp.past = rc["past"].get<double>();
    try {
      fp.validate();
    } catch (const Error& e) {
      fail(ErrorCode::config, std::string("config.rho: ") + e.what());
    }
    FbmSimulator sim(fp);
    std::vector<std::vector<double>> resid(rho_pairs.size(), std::vector<double>(N));
    std::vector<double> half(N), full(N);
    const double t_half = fp.horizon / 2;
    parallel_for(N, opt.workers, [&](std::size_t k) {
      FbmPath p = sim.simulate_stream(opt.seed + 1 + hi, k);
      for (std::size_t a = 0; a < rho_pairs.size(); ++a) {
        const double r = p.value_at(0, rho_pairs[a][1]) - p.conditional_mean_at(0, rho_pairs[a][0], rho_pairs[a][1]);
        resid[a][k] = r * r;
      }
      half[k] = p.value_at(0, t_half) * p.value_at(0, t_half);
      full[k] = p.values(0).back() * p.values(0).back();
    });
    PlotSeries est_series{"H=" + num(fp.hurst) + " estimate", {}, {}};
    for (std::size_t a = 0; a < rho_pairs.size(); ++a) {
      const double u = rho_pairs[a][0], v = rho_pairs[a][1];
      const double est = mean(resid[a]), se = standard_error(resid[a]), expected = rho(fp.hurst, u, v);
      const double z = (est - expected) / se;
      worst_z = std::max(worst_z, std::abs(z));
      out.results.add({"rho", num(fp.hurst), num(u), num(v), num(est), num(expected), num(se), num(z),
                       num(std::abs(est - expected) / expected)});
      est_series.x.push_back(expected);
      est_series.y.push_back(est);
    }
    series.push_back(est_series);
    const double ratio = mean(full) / mean(half);
    out.results.add({"self_similarity", num(fp.hurst), num(t_half), num(fp.horizon), num(ratio),
                     num(std::pow(2.0, 2 * fp.hurst)), "nan", "nan",
                     num(std::abs(ratio - std::pow(2.0, 2 * fp.hurst)) / std::pow(2.0, 2 * fp.hurst))});
    FbmParams doubled = fp;
    doubled.past = 2 * fp.past_length();
    const double v1 = discrete_variance(*FbmKernels::build(fp));
    const double v2 = discrete_variance(*FbmKernels::build(doubled));
    const double exact = mvn_variance(fp.hurst, fp.horizon);
    bias.push_back({{"hurst", fp.hurst}, {"past", fp.past_length()}, {"variance", jnum(v1)},
                    {"variance_doubled_past", jnum(v2)}, {"mvn_variance", jnum(exact)},
                    {"relative_bias", jnum((v1 - exact) / exact)}, {"doubling_change", jnum((v2 - v1) / exact)}});
  }

  out.metrics["max_covariance_relative_error"] = jnum(worst_cov);
  out.metrics["cross_covariance_z"] = jnum(cross_est / cross_se);
  out.metrics["max_rho_abs_z"] = jnum(worst_z);
  out.metrics["truncation_bias"] = bias;
  const bool pass = worst_cov <= cov_tol && worst_z <= z_max;
  out.criteria.push_back({3, "fbm structure", pass,
                          {{"paths", N}, {"max_covariance_relative_error", jnum(worst_cov)},
                           {"covariance_tolerance", cov_tol}, {"max_rho_abs_z", jnum(worst_z)}, {"z_max", z_max}}});

  PlotSpec plot;
  plot.title = "fbm-check: conditional variance";
  plot.xlabel = "rho(u,v)";
  plot.ylabel = "E[(B_v - E_u B_v)^2]";
  plot.log_x = plot.log_y = true;
  std::vector<double> diag_x, diag_y;
  for (const auto& s : series)
    for (double x : s.x) {
      diag_x.push_back(x);
      diag_y.push_back(x);
    }
  std::sort(diag_x.begin(), diag_x.end());
  diag_y = diag_x;
  series.push_back({"identity", diag_x, diag_y});
  plot.series = series;
  out.plots.push_back({"rho.svg", plot});
  return out;
}

}  // namespace sewkit::exp
