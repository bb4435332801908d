#include <algorithm>
#include <cmath>
#include <memory>

#include "experiments/experiments.hpp"
#include "sewkit/error.hpp"
#include "sewkit/fbm.hpp"
#include "sewkit/functionals.hpp"
#include "sewkit/parallel.hpp"
#include "sewkit/stats.hpp"

namespace sewkit::exp {

namespace {

json profile_defaults(const std::string& kind) {
  return {{"kind", kind}, {"amplitude", 1.0}, {"lambda", std::vector<double>{1.0, 0.0}},
          {"sigma", 0.5}, {"alpha", 0.0},     {"max_block", 1},
          {"waves", 2},   {"seed", std::uint64_t{7}}, {"theta", "inf"}};
}

FbmParams fbm_from(const json& cfg, double hurst, std::size_t steps, std::size_t dim) {
  FbmParams fp;
  fp.hurst = hurst;
  fp.dim = dim;
  fp.horizon = cfg["horizon"].get<double>();
  fp.past = cfg["past"].get<double>();
  fp.steps = steps;
  try {
    fp.validate();
  } catch (const Error& e) {
    fail(ErrorCode::config, std::string("config: ") + e.what());
  }
  return fp;
}

GridSpec grid_from(const json& g) {
  GridSpec spec;
  spec.dim = g["dim"].get<int>();
  spec.n = g["n"].get<std::size_t>();
  spec.half_period = g["L"].get<double>();
  try {
    spec.validate();
  } catch (const Error& e) {
    fail(ErrorCode::config, std::string("config.grid: ") + e.what());
  }
  return spec;
}

}  // namespace

json functional_rate_defaults() {
  return {
      {"profile", profile_defaults("besov_random")},
      {"grid", {{"dim", 1}, {"n", std::size_t{1024}}, {"L", 8.0}}},
      {"hursts", std::vector<double>{0.25, 0.5}},
      {"horizon", 1.0},
      {"past", 0.0},
      {"steps", std::size_t{1024}},
      {"paths", std::size_t{500}},
      {"level_min", 3},
      {"level_max", 8},
      {"fine_levels", 3},
      {"slope_tolerance", 0.15},
  };
}

Output run_functional_rate(const json& cfg, const RunOptions& opt) {
  Output out;
  const TimeProfile profile = TimeProfile::from_json(cfg["profile"]);
  const GridSpec spec = grid_from(cfg["grid"]);
  const auto hursts = cfg["hursts"].get<std::vector<double>>();
  const auto steps = cfg["steps"].get<std::size_t>();
  const auto paths = cfg["paths"].get<std::size_t>();
  const int lmin = cfg["level_min"].get<int>(), lmax = cfg["level_max"].get<int>();
  const int fine = cfg["fine_levels"].get<int>();
  const double tol = cfg["slope_tolerance"].get<double>();
  require(paths >= 1, ErrorCode::config, "config.paths must be >= 1");
  require(lmin >= 0 && lmax - lmin + 1 >= 3, ErrorCode::config, "config: need at least three levels");
  require(fine >= 2 && fine <= lmax - lmin + 1, ErrorCode::config, "config.fine_levels out of range");
  require((std::size_t{1} << lmax) <= steps, ErrorCode::config, "config: 2^level_max must not exceed steps");

  out.results.header = {"hurst", "level", "mesh_w", "rms_error"};
  json per_config = json::array();
  bool all_ok = true;
  bool any_degenerate = false;
  PlotSpec plot;
  plot.title = "functional-rate";
  plot.xlabel = "mesh_w";
  plot.ylabel = "RMS L2 error";
  plot.log_x = plot.log_y = true;

  for (std::size_t hi = 0; hi < hursts.size(); ++hi) {
    const double H = hursts[hi];
    const FbmParams fp = fbm_from(cfg, H, steps, static_cast<std::size_t>(spec.dim));
    FbmSimulator sim(fp);
    const Control control = Control::linear(fp.horizon);
    std::vector<Partition> parts;
    std::vector<double> meshes;
    for (int h = lmin; h <= lmax; ++h) {
      parts.push_back(dyadic_partition(control, 0.0, fp.horizon, h));
      meshes.push_back(mesh(control, parts.back()));
    }
    const std::size_t nl = parts.size();
    std::vector<std::vector<double>> errors(nl, std::vector<double>(paths));
    parallel_for(paths, opt.workers, [&](std::size_t k) {
      FbmPath path = sim.simulate_stream(opt.seed + hi, k);
      FunctionalGerm germ(profile, spec, path);
      const ModalField ref = germ.reference(steps);
      for (std::size_t l = 0; l < nl; ++l) {
        ModalField diff = germ.riemann(parts[l]);
        diff -= ref;
        errors[l][k] = value_norm(diff);
      }
    });
    std::vector<double> rmse(nl);
    std::size_t nonzero = 0;
    for (std::size_t l = 0; l < nl; ++l) {
      rmse[l] = rms(errors[l]);
      nonzero += rmse[l] > 1e-13 * std::max(1.0, rmse.front());
      out.results.add({num(H), num(lmin + static_cast<int>(l)), num(meshes[l]), num(rmse[l])});
    }
    json entry{{"hurst", H}};
    const double predicted = std::min(0.5 + H, 1.0);
    entry["predicted_exponent"] = predicted;
    if (nonzero < 3) {
      entry["fit"] = "degenerate: exact";
      entry["slope"] = nullptr;
      any_degenerate = true;
    } else {
      const double slope = fit_loglog(meshes, rmse).slope;
      std::span<const double> fm(meshes.data() + nl - static_cast<std::size_t>(fine), static_cast<std::size_t>(fine));
      std::span<const double> fr(rmse.data() + nl - static_cast<std::size_t>(fine), static_cast<std::size_t>(fine));
      const double fine_slope = fit_loglog(fm, fr).slope;
      const bool ok = slope > 0 && std::abs(slope - fine_slope) <= tol;
      entry["slope"] = jnum(slope);
      entry["fine_level_slope"] = jnum(fine_slope);
      entry["within_prediction"] = std::abs(slope - predicted) <= tol;
      entry["self_consistent"] = ok;
      all_ok = all_ok && ok;
    }
    per_config.push_back(entry);
    plot.series.push_back({"H=" + num(H), meshes, rmse});
  }
  out.metrics["configurations"] = per_config;
  if (any_degenerate) out.notes.push_back("degenerate: exact");
  if (!any_degenerate)
    out.criteria.push_back({10, "functional rate", all_ok, {{"configurations", per_config}, {"tolerance", tol}}});
  out.plots.push_back({"error.svg", plot});
  return out;
}

json regularity_probe_defaults() {
  return {
      {"profile", profile_defaults("dirac")},
      {"hurst", 0.5},
      {"horizon", 1.0},
      {"past", 0.0},
      {"steps", std::size_t{16384}},
      {"L", 8.0},
      {"spatial_n", std::vector<std::size_t>{128, 256, 512}},
      {"gamma_factors", std::vector<double>{0.7, 1.3}},
      {"besov", {{"alpha", -0.51}, {"p", 2.0}, {"q", 2.0}}},
      {"theta", 2.0},
      {"moment", 2.0},
      {"paths", std::size_t{40}},
      {"stable_slope", 0.1},
      {"upward_slope", 0.15},
  };
}

Output run_regularity_probe(const json& cfg, const RunOptions& opt) {
  Output out;
  RegularityProbeConfig pc;
  pc.profile = TimeProfile::from_json(cfg["profile"]);
  pc.fbm = fbm_from(cfg, cfg["hurst"].get<double>(), cfg["steps"].get<std::size_t>(), 1);
  pc.half_period = cfg["L"].get<double>();
  pc.spatial_n = cfg["spatial_n"].get<std::vector<std::size_t>>();
  pc.besov = {real(cfg["besov"]["alpha"]), real(cfg["besov"]["p"]), real(cfg["besov"]["q"])};
  pc.moment = real(cfg["moment"]);
  pc.paths = cfg["paths"].get<std::size_t>();
  pc.seed = opt.seed;
  pc.workers = opt.workers;
  pc.stable_slope = cfg["stable_slope"].get<double>();
  pc.upward_slope = cfg["upward_slope"].get<double>();
  const double theta = real(cfg["theta"]);
  ExponentBudget budget;
  try {
    budget = regularity_budget(pc.fbm.hurst, 1, theta, pc.besov.alpha, pc.besov.p, pc.besov.q);
  } catch (const Error& e) {
    fail(ErrorCode::config, std::string("config: ") + e.what());
  }
  require(budget.gamma_positive, ErrorCode::config, "config: the regularity budget gamma_max is not positive");
  const auto factors = cfg["gamma_factors"].get<std::vector<double>>();
  for (double f : factors) pc.gammas.push_back(f * budget.gamma_max);
  RegularityProbeReport rep = regularity_probe(pc);

  out.results.header = {"gamma", "gamma_factor", "n", "statistic"};
  for (std::size_t g = 0; g < rep.gammas.size(); ++g)
    for (std::size_t a = 0; a < rep.spatial_n.size(); ++a)
      out.results.add({num(rep.gammas[g]), num(factors[g]), num(rep.spatial_n[a]), num(rep.stat[g][a])});

  out.metrics["budget"] = budget.to_json();
  out.metrics["gamma_max"] = budget.gamma_max;
  json per = json::array();
  bool pass = true, below = false, above = false;
  for (std::size_t g = 0; g < rep.gammas.size(); ++g) {
    per.push_back({{"gamma", rep.gammas[g]}, {"factor", factors[g]}, {"slope", jnum(rep.slopes[g])},
                   {"trend", rep.trend[g]}});
    if (factors[g] < 1) {
      below = true;
      pass = pass && rep.trend[g] == "stable";
    } else if (factors[g] > 1) {
      above = true;
      pass = pass && rep.trend[g] == "upward";
    }
  }
  out.metrics["gammas"] = per;
  if (pc.profile.kind == TimeProfile::Kind::dirac && below && above)
    out.criteria.push_back({11, "regularity threshold", pass,
                            {{"gammas", per}, {"gamma_max", budget.gamma_max}, {"stable_slope", pc.stable_slope},
                             {"upward_slope", pc.upward_slope}}});

  PlotSpec plot;
  plot.title = "regularity-probe";
  plot.xlabel = "n";
  plot.ylabel = "L^m norm of Besov norm";
  plot.log_x = plot.log_y = true;
  for (std::size_t g = 0; g < rep.gammas.size(); ++g) {
    PlotSeries s{"gamma=" + num(std::round(rep.gammas[g] * 1000) / 1000), {}, rep.stat[g]};
    for (std::size_t n : rep.spatial_n) s.x.push_back(static_cast<double>(n));
    plot.series.push_back(s);
  }
  out.plots.push_back({"norms.svg", plot});
  return out;
}

json occupation_defaults() {
  return {
      {"hurst", 0.5},
      {"horizon", 1.0},
      {"past", 0.0},
      {"steps", std::size_t{4096}},
      {"grid", {{"dim", 1}, {"n", std::size_t{4096}}, {"L", 8.0}}},
      {"bump_sigma", 0.5},
      {"paths", std::size_t{8}},
      {"levels", std::vector<int>{8, 10, 12}},
      {"tolerance", 0.05},
      {"mass_tolerance", 1e-10},
  };
}

Output run_occupation(const json& cfg, const RunOptions& opt) {
  Output out;
  const GridSpec spec = grid_from(cfg["grid"]);
  const auto steps = cfg["steps"].get<std::size_t>();
  const FbmParams fp = fbm_from(cfg, cfg["hurst"].get<double>(), steps, static_cast<std::size_t>(spec.dim));
  const auto paths = cfg["paths"].get<std::size_t>();
  auto levels = cfg["levels"].get<std::vector<int>>();
  require(!levels.empty(), ErrorCode::config, "config.levels must not be empty");
  std::sort(levels.begin(), levels.end());
  for (int h : levels)
    require(h >= 0 && (std::size_t{1} << h) <= steps, ErrorCode::config, "config.levels: 2^level must not exceed steps");
  const double tol = cfg["tolerance"].get<double>(), mass_tol = cfg["mass_tolerance"].get<double>();
  TimeProfile bump;
  bump.kind = TimeProfile::Kind::gaussian_bump;
  bump.sigma = cfg["bump_sigma"].get<double>();
  TimeProfile one;
  one.kind = TimeProfile::Kind::constant;
  FbmSimulator sim(fp);
  const Control control = Control::linear(fp.horizon);
  const std::size_t nl = levels.size();
  std::vector<std::vector<OccupationResult>> bump_res(paths, std::vector<OccupationResult>(nl));
  std::vector<std::vector<OccupationResult>> one_res(paths, std::vector<OccupationResult>(nl));
  parallel_for(paths, opt.workers, [&](std::size_t k) {
    FbmPath path = sim.simulate_stream(opt.seed, k);
    for (std::size_t l = 0; l < nl; ++l) {
      Partition pi = dyadic_partition(control, 0.0, fp.horizon, levels[l]);
      bump_res[k][l] = occupation_check(path, bump, spec, pi);
      one_res[k][l] = occupation_check(path, one, spec, pi);
    }
  });
  out.results.header = {"path", "level", "profile", "pairing_re", "pairing_im", "direct_re", "residual"};
  std::vector<double> worst_bump(nl, 0.0), worst_one(nl, 0.0);
  for (std::size_t k = 0; k < paths; ++k)
    for (std::size_t l = 0; l < nl; ++l) {
      for (int which = 0; which < 2; ++which) {
        const OccupationResult& r = which == 0 ? bump_res[k][l] : one_res[k][l];
        out.results.add({num(k), num(levels[l]), which == 0 ? "gaussian_bump" : "constant", num(r.pairing.real()),
                         num(r.pairing.imag()), num(r.direct.real()), num(r.residual)});
      }
      worst_bump[l] = std::max(worst_bump[l], bump_res[k][l].residual);
      worst_one[l] = std::max(worst_one[l], one_res[k][l].residual);
    }
  json per = json::array();
  for (std::size_t l = 0; l < nl; ++l)
    per.push_back({{"level", levels[l]}, {"max_bump_residual", jnum(worst_bump[l])},
                   {"max_constant_residual", jnum(worst_one[l])}});
  out.metrics["levels"] = per;
  const double mass = *std::max_element(worst_one.begin(), worst_one.end());
  out.criteria.push_back({12, "occupation identity", worst_bump.back() < tol && mass < mass_tol,
                          {{"finest_level", levels.back()}, {"max_bump_residual", jnum(worst_bump.back())},
                           {"tolerance", tol}, {"max_constant_residual", jnum(mass)},
                           {"mass_tolerance", mass_tol}}});
  PlotSpec plot;
  plot.title = "occupation residual";
  plot.xlabel = "level";
  plot.ylabel = "max relative residual";
  plot.log_y = true;
  PlotSeries s{"gaussian bump", {}, worst_bump};
  for (int h : levels) s.x.push_back(h);
  plot.series.push_back(s);
  out.plots.push_back({"residual.svg", plot});
  return out;
}

}  // namespace sewkit::exp
