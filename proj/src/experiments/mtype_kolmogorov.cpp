#include <algorithm>
#include <cmath>

#include "experiments/experiments.hpp"
#include "sewkit/control.hpp"
#include "sewkit/error.hpp"
#include "sewkit/fbm.hpp"
#include "sewkit/kolmogorov.hpp"
#include "sewkit/mtype.hpp"
#include "sewkit/parallel.hpp"
#include "sewkit/random.hpp"
#include "sewkit/stats.hpp"

namespace sewkit::exp {

json mtype_defaults() {
  return {
      {"type",
       {{"p", 1.5},
        {"depths", std::vector<std::size_t>{2, 4, 6, 8, 10, 12, 14, 16}},
        {"exponent", 2.0},
        {"m", 2.0},
        {"slope_tolerance", 0.05}}},
      {"bounded", {{"ps", std::vector<double>{1.5, 2.0, 3.0}}, {"depths", std::vector<std::size_t>{4, 8, 12}},
                   {"dim", std::size_t{4}}, {"m", 2.0}}},
      {"hilbert", {{"depth", std::size_t{12}}, {"dim", std::size_t{4}}}},
      {"doob",
       {{"depths", std::vector<std::size_t>{4, 8, 12}},
        {"dims", std::vector<std::size_t>{1, 2, 3, 4}},
        {"ps", std::vector<double>{1.5, 2.0, 3.0}},
        {"drift_scales", std::vector<double>{0.0, 0.1}},
        {"sequences", std::size_t{100}},
        {"g_coins", std::size_t{2}},
        {"m", 2.0},
        {"n", 4.0},
        {"max_spread", 2.0},
        {"slope_tolerance", 0.1}}},
  };
}

Output run_mtype(const json& cfg, const RunOptions& opt) {
  Output out;
  out.results.header = {"section", "depth", "p", "dim", "value"};

  // Sign martingale in l^p(R^N).
  const auto& tc = cfg["type"];
  const double p = real(tc["p"]), expo = real(tc["exponent"]), m = real(tc["m"]);
  const auto depths = tc["depths"].get<std::vector<std::size_t>>();
  require(!depths.empty(), ErrorCode::config, "config.type.depths must not be empty");
  double worst_exact = 0;
  std::vector<double> logn, logr, dn, dr;
  for (std::size_t N : depths) {
    require(N >= 1 && N <= kMaxTreeCoins, ErrorCode::config, "config.type.depths: depth must lie in [1, 16]");
    TreeMartingale f = TreeMartingale::sign_martingale(N, p);
    const double exact = type_ratio(f, std::min(2.0, p), m);
    const double grown = type_ratio(f, expo, m);
    worst_exact = std::max(worst_exact, std::abs(exact - 1.0));
    out.results.add({"type_ratio_own", num(N), num(p), num(N), num(exact)});
    out.results.add({"type_ratio_exponent", num(N), num(p), num(N), num(grown)});
    logn.push_back(std::log(static_cast<double>(N)));
    logr.push_back(std::log(grown));
    dn.push_back(static_cast<double>(N));
    dr.push_back(grown);
  }
  const double type_slope = depths.size() >= 2 ? fit_line(logn, logr).slope : std::nan("");
  const double expected_slope = 1.0 / std::min(2.0, p) - 1.0 / expo;

  // Random centered martingales with the natural type exponent.
  const auto& bc = cfg["bounded"];
  json bounded = json::array();
  std::uint64_t stream = 0;
  for (double bp : bc["ps"].get<std::vector<double>>()) {
    std::vector<double> ln, lr;
    for (std::size_t N : bc["depths"].get<std::vector<std::size_t>>()) {
      TreeMartingale f = TreeMartingale::random(N, bc["dim"].get<std::size_t>(), bp, stream_seed(opt.seed, stream++), true);
      const double r = type_ratio(f, std::min(2.0, bp), real(bc["m"]));
      out.results.add({"type_ratio_random", num(N), num(bp), num(bc["dim"].get<std::size_t>()), num(r)});
      ln.push_back(std::log(static_cast<double>(N)));
      lr.push_back(std::log(r));
    }
    bounded.push_back({{"p", bp}, {"slope", ln.size() >= 2 ? jnum(fit_line(ln, lr).slope) : json(nullptr)}});
  }

  // Pythagorean identity.
  const auto& hc = cfg["hilbert"];
  TreeMartingale hm = TreeMartingale::random(hc["depth"].get<std::size_t>(), hc["dim"].get<std::size_t>(), 2.0,
                                             stream_seed(opt.seed, 0x9174), true);
  const double gap = pythagorean_gap(hm);
  out.results.add({"pythagorean_gap", num(hc["depth"].get<std::size_t>()), "2", num(hc["dim"].get<std::size_t>()),
                   num(gap)});

  out.metrics["type"] = {{"max_abs_ratio_minus_one", jnum(worst_exact)}, {"exponent_slope", jnum(type_slope)},
                         {"expected_slope", expected_slope}, {"bounded", bounded}, {"pythagorean_gap", jnum(gap)}};
  const double tol7 = tc["slope_tolerance"].get<double>();
  out.criteria.push_back({7, "martingale type",
                          worst_exact <= 1e-12 && std::abs(type_slope - expected_slope) <= tol7 && gap <= 1e-12,
                          {{"max_abs_ratio_minus_one", jnum(worst_exact)}, {"exponent_slope", jnum(type_slope)},
                           {"expected_slope", expected_slope}, {"slope_tolerance", tol7},
                           {"pythagorean_gap", jnum(gap)}}});

  // Conditional Doob inequality over an ensemble of tree sequences.
  const auto& dc = cfg["doob"];
  const auto ddepths = dc["depths"].get<std::vector<std::size_t>>();
  const auto ddims = dc["dims"].get<std::vector<std::size_t>>();
  const auto dps = dc["ps"].get<std::vector<double>>();
  const auto drifts = dc["drift_scales"].get<std::vector<double>>();
  const auto count = dc["sequences"].get<std::size_t>();
  const auto g = dc["g_coins"].get<std::size_t>();
  const double dm = real(dc["m"]), dn_ = real(dc["n"]);
  require(!ddepths.empty() && !ddims.empty() && !dps.empty() && !drifts.empty(), ErrorCode::config,
          "config.doob: lists must not be empty");
  for (std::size_t N : ddepths)
    require(g + N <= kMaxTreeCoins, ErrorCode::config, "config.doob: g_coins + depth exceeds 16");
  struct DoobRow {
    std::size_t N, dim;
    double p, drift, C, split;
  };
  std::vector<DoobRow> rows(count);
  parallel_for(count, opt.workers, [&](std::size_t s) {
    DoobRow r;
    r.N = ddepths[s % ddepths.size()];
    r.p = dps[(s / ddepths.size()) % dps.size()];
    r.dim = ddims[(s / (ddepths.size() * dps.size())) % ddims.size()];
    r.drift = drifts[(s / (ddepths.size() * dps.size() * ddims.size())) % drifts.size()];
    TreeSequence seq = random_tree_sequence(g, r.N, r.dim, r.p, r.drift, stream_seed(opt.seed, 0xD00B0000 + s));
    r.C = doob_terms(seq, std::min(2.0, r.p), dm, dn_).minimal_constant();
    r.split = doob_split_error(seq);
    rows[s] = r;
  });
  std::vector<double> cmax(ddepths.size(), 0.0);
  double split = 0;
  for (const auto& r : rows) {
    out.results.add({"doob_minimal_constant", num(r.N), num(r.p), num(r.dim), num(r.C)});
    const auto at = static_cast<std::size_t>(std::find(ddepths.begin(), ddepths.end(), r.N) - ddepths.begin());
    cmax[at] = std::max(cmax[at], r.C);
    split = std::max(split, r.split);
  }
  std::vector<double> ln, lc;
  for (std::size_t a = 0; a < ddepths.size(); ++a) {
    ln.push_back(std::log(static_cast<double>(ddepths[a])));
    lc.push_back(std::log(cmax[a]));
  }
  const double cmin_v = *std::min_element(cmax.begin(), cmax.end());
  const double cmax_v = *std::max_element(cmax.begin(), cmax.end());
  const double spread = cmin_v > 0 ? cmax_v / cmin_v : std::numeric_limits<double>::infinity();
  const double dslope = ddepths.size() >= 2 && cmin_v > 0 ? fit_line(ln, lc).slope : std::nan("");
  json per = json::array();
  for (std::size_t a = 0; a < ddepths.size(); ++a) per.push_back({{"depth", ddepths[a]}, {"C", jnum(cmax[a])}});
  out.metrics["doob"] = {{"per_depth", per}, {"spread", jnum(spread)}, {"slope", jnum(dslope)},
                         {"max_split_error", jnum(split)}};
  out.notes.push_back("doob constants are empirical maxima over this ensemble, not the inequality's constant");
  const double tol8 = dc["slope_tolerance"].get<double>(), max_spread = dc["max_spread"].get<double>();
  out.criteria.push_back({8, "conditional doob inequality",
                          std::isfinite(cmax_v) && spread < max_spread && std::abs(dslope) <= tol8 && split <= 1e-12,
                          {{"per_depth", per}, {"spread", jnum(spread)}, {"max_spread", max_spread},
                           {"slope", jnum(dslope)}, {"slope_tolerance", tol8}, {"max_split_error", jnum(split)}}});

  PlotSpec plot;
  plot.title = "mtype: sign martingale";
  plot.xlabel = "N";
  plot.ylabel = "type ratio with exponent " + num(expo);
  plot.log_x = plot.log_y = true;
  plot.series.push_back({"ratio", dn, dr});
  out.plots.push_back({"type_ratio.svg", plot});
  PlotSpec dplot;
  dplot.title = "mtype: empirical Doob constant";
  dplot.xlabel = "N";
  dplot.ylabel = "max minimal C";
  dplot.log_x = dplot.log_y = true;
  std::vector<double> dx(ddepths.begin(), ddepths.end());
  dplot.series.push_back({"C", dx, cmax});
  out.plots.push_back({"doob.svg", dplot});
  return out;
}

json kolmogorov_defaults() {
  return {
      {"paths", std::size_t{500}},
      {"hurst", 0.5},
      {"horizon", 1.0},
      {"past", 0.0},
      {"levels", std::vector<int>{8, 10, 12}},
      {"betas", std::vector<double>{0.3, 0.45}},
      {"moment", 8.0},
      {"stable_slope", 0.0025},
      {"upward_slope", 0.005},
  };
}

Output run_kolmogorov(const json& cfg, const RunOptions& opt) {
  Output out;
  const auto paths = cfg["paths"].get<std::size_t>();
  auto levels = cfg["levels"].get<std::vector<int>>();
  const auto betas = cfg["betas"].get<std::vector<double>>();
  const double moment = real(cfg["moment"]);
  require(paths >= 2, ErrorCode::config, "config.paths must be >= 2");
  require(!levels.empty() && !betas.empty(), ErrorCode::config, "config: levels and betas must not be empty");
  std::sort(levels.begin(), levels.end());
  require(levels.front() >= 1 && levels.back() <= 20, ErrorCode::config, "config.levels must lie in [1, 20]");
  FbmParams fp;
  fp.hurst = cfg["hurst"].get<double>();
  fp.horizon = cfg["horizon"].get<double>();
  fp.past = cfg["past"].get<double>();
  fp.steps = std::size_t{1} << levels.back();
  try {
    fp.validate();
  } catch (const Error& e) {
    fail(ErrorCode::config, std::string("config: ") + e.what());
  }
  FbmSimulator sim(fp);
  const Control control = Control::linear(fp.horizon);
  DyadicPairs pairs(control, fp.horizon, levels.back());
  std::vector<std::vector<double>> values(paths);
  parallel_for(paths, opt.workers, [&](std::size_t k) {
    FbmPath path = sim.simulate_stream(opt.seed, k);
    const auto pts = pairs.points();
    values[k].resize(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) values[k][i] = path.value_at(0, pts[i]);
  });
  ModulusReport rep = tail_study(values, pairs, betas, levels, moment, cfg["stable_slope"].get<double>(),
                                 cfg["upward_slope"].get<double>());
  out.results.header = {"beta", "level", "lm_norm", "mean", "median", "q90"};
  for (std::size_t b = 0; b < betas.size(); ++b)
    for (std::size_t l = 0; l < levels.size(); ++l)
      out.results.add({num(betas[b]), num(levels[l]), num(rep.lm_norm[b][l]), num(rep.mean[b][l]),
                       num(rep.median[b][l]), num(rep.q90[b][l])});
  const double beta0 = fp.hurst - 1.0 / moment;
  json per = json::array();
  bool pass = true, below = false, above = false;
  for (std::size_t b = 0; b < betas.size(); ++b) {
    per.push_back({{"beta", betas[b]}, {"slope", jnum(rep.slopes[b])}, {"trend", rep.trend[b]},
                   {"pathwise_finite", betas[b] < fp.hurst}});
    if (betas[b] < beta0) {
      below = true;
      pass = pass && rep.trend[b] == "stable";
    } else if (betas[b] > beta0) {
      above = true;
      pass = pass && rep.trend[b] == "upward";
    }
  }
  out.metrics["beta0"] = beta0;
  out.metrics["betas"] = per;
  out.notes.push_back("statistics use w normalized to w(0,T) = 1");
  if (below && above)
    out.criteria.push_back({13, "kolmogorov modulus", pass,
                            {{"betas", per}, {"beta0", beta0}, {"moment", moment}, {"paths", paths}}});
  PlotSpec plot;
  plot.title = "kolmogorov: L^m norm of M_beta";
  plot.xlabel = "level";
  plot.ylabel = "L^m norm";
  plot.log_y = true;
  for (std::size_t b = 0; b < betas.size(); ++b) {
    PlotSeries s{"beta=" + num(betas[b]), {}, rep.lm_norm[b]};
    for (int h : levels) s.x.push_back(h);
    plot.series.push_back(s);
  }
  out.plots.push_back({"modulus.svg", plot});
  return out;
}

}  // namespace sewkit::exp
