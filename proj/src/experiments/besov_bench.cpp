#include <algorithm>
#include <cmath>
#include <numbers>

#include "experiments/experiments.hpp"
#include "sewkit/error.hpp"
#include "sewkit/parallel.hpp"
#include "sewkit/random.hpp"
#include "sewkit/spectral.hpp"
#include "sewkit/stats.hpp"

namespace sewkit::exp {

namespace {

GridSpec grid(int dim, std::size_t n, double L) {
  GridSpec spec{dim, n, L};
  try {
    spec.validate();
  } catch (const Error& e) {
    fail(ErrorCode::config, std::string("config: ") + e.what());
  }
  return spec;
}

}  // namespace

json besov_bench_defaults() {
  const double four_pi = 4 * std::numbers::pi;
  return {
      {"heat",
       {{"n", std::size_t{256}},
        {"L", four_pi},
        {"lambda", 4.0},
        {"kappas", std::vector<double>{0.0, 0.015625, 0.03125, 0.0625, 0.125, 0.25}},
        {"p", 2.0},
        {"trials", std::size_t{16}},
        {"tolerance", 1e-6}}},
      {"bernstein",
       {{"n", std::size_t{512}},
        {"band_modes", 64},
        {"lambdas", std::vector<double>{4.0, 8.0, 16.0}},
        {"k", 1},
        {"p", 4.0},
        {"q", 4.0},
        {"trials", std::size_t{64}},
        {"slope_tolerance", 0.05}}},
      {"pag",
       {{"ns", std::vector<std::size_t>{1024, 2048, 4096}},
        {"L", 8.0},
        {"alpha", 0.0},
        {"gamma", 0.5},
        {"p", 2.0},
        {"q", 2.0},
        {"field_alpha", 0.0},
        {"max_j", 5},
        {"waves", 3},
        {"fields", std::size_t{8}},
        {"max_variation", 0.2}}},
  };
}

Output run_besov_bench(const json& cfg, const RunOptions& opt) {
  Output out;
  out.results.header = {"check", "parameter", "value", "statistic"};

  // Heat decay on the annulus.
  const auto& hc = cfg["heat"];
  const GridSpec hspec = grid(1, hc["n"].get<std::size_t>(), hc["L"].get<double>());
  const double lambda = hc["lambda"].get<double>();
  require(lambda < hspec.max_frequency(), ErrorCode::config, "config.heat.lambda must lie below Nyquist");
  const auto kappas = hc["kappas"].get<std::vector<double>>();
  const double hp = real(hc["p"]);
  HeatDecayReport wave = heat_decay_check(hspec, lambda, kappas, hp, AnnulusEnsemble::plane_wave, 1, opt.seed);
  HeatDecayReport rnd = heat_decay_check(hspec, lambda, kappas, hp, AnnulusEnsemble::random,
                                         hc["trials"].get<std::size_t>(), opt.seed);
  for (std::size_t i = 0; i < wave.x.size(); ++i) {
    out.results.add({"heat_plane_wave", "kappa_lambda2", num(wave.x[i]), num(wave.log_ratio[i])});
    out.results.add({"heat_random_annulus", "kappa_lambda2", num(rnd.x[i]), num(rnd.log_ratio[i])});
  }
  const double heat_tol = hc["tolerance"].get<double>();
  const bool heat_ok = std::abs(wave.c_hat - 0.5) <= heat_tol;
  out.metrics["heat"] = {{"plane_wave_c_hat", jnum(wave.c_hat)}, {"plane_wave_C_hat", jnum(wave.C_hat)},
                         {"random_c_hat", jnum(rnd.c_hat)}, {"random_C_hat", jnum(rnd.C_hat)},
                         {"random_r2", jnum(rnd.r2)}};

  // Bernstein inequality over lambda-doubling.
  const auto& bc = cfg["bernstein"];
  const auto lambdas = bc["lambdas"].get<std::vector<double>>();
  require(lambdas.size() >= 2, ErrorCode::config, "config.bernstein.lambdas needs at least two values");
  std::vector<double> ratios, loglam, logratio;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    // The period scales with 1/lambda so every band holds the same number of modes.
    const double L = std::numbers::pi * bc["band_modes"].get<double>() / lambdas[i];
    const GridSpec bspec = grid(1, bc["n"].get<std::size_t>(), L);
    require(lambdas[i] < bspec.max_frequency(), ErrorCode::config, "config.bernstein: lambda must lie below Nyquist");
    BernsteinReport r = bernstein_check(bspec, lambdas[i], bc["k"].get<int>(), real(bc["p"]), real(bc["q"]),
                                        bc["trials"].get<std::size_t>(), stream_seed(opt.seed, 0xBE000 + i));
    ratios.push_back(r.max_ratio);
    loglam.push_back(std::log(lambdas[i]));
    logratio.push_back(std::log(r.max_ratio));
    out.results.add({"bernstein", "lambda", num(lambdas[i]), num(r.max_ratio)});
  }
  const double bslope = fit_line(loglam, logratio).slope;
  const double btol = bc["slope_tolerance"].get<double>();
  const bool bern_ok = std::abs(bslope) <= btol;
  out.metrics["bernstein"] = {{"max_ratios", ratios}, {"trend_slope", jnum(bslope)}};

  // Pag statistic under grid refinement.
  const auto& pc = cfg["pag"];
  const auto ns = pc["ns"].get<std::vector<std::size_t>>();
  const int max_j = pc["max_j"].get<int>();
  const auto fields = pc["fields"].get<std::size_t>();
  require(ns.size() >= 2 && fields >= 1, ErrorCode::config, "config.pag: need two grid sizes and one field");
  std::vector<double> pag_kappas;
  for (int e = 2 * max_j + 4; e >= 0; --e) pag_kappas.push_back(std::ldexp(1.0, -e));
  std::vector<std::vector<double>> sup(fields, std::vector<double>(ns.size()));
  parallel_for(fields * ns.size(), opt.workers, [&](std::size_t job) {
    const std::size_t f = job / ns.size(), a = job % ns.size();
    const GridSpec spec = grid(1, ns[a], pc["L"].get<double>());
    require(max_j <= max_block(spec), ErrorCode::config, "config.pag.max_j exceeds the grid's blocks");
    SpectralField g = random_multi_block(spec, pc["field_alpha"].get<double>(), max_j, pc["waves"].get<int>(),
                                         stream_seed(opt.seed, 0xFA6000 + f));
    sup[f][a] = pag_check(g, pc["alpha"].get<double>(), pc["gamma"].get<double>(), real(pc["p"]), real(pc["q"]),
                          pag_kappas)
                    .sup_stat;
  });
  double variation = 0;
  for (std::size_t f = 0; f < fields; ++f) {
    const double lo = *std::min_element(sup[f].begin(), sup[f].end());
    const double hi = *std::max_element(sup[f].begin(), sup[f].end());
    variation = std::max(variation, lo > 0 ? hi / lo - 1 : std::numeric_limits<double>::infinity());
    for (std::size_t a = 0; a < ns.size(); ++a)
      out.results.add({"pag_field_" + num(f), "n", num(ns[a]), num(sup[f][a])});
  }
  const double max_var = pc["max_variation"].get<double>();
  const bool pag_ok = variation < max_var;
  out.metrics["pag"] = {{"max_relative_variation", jnum(variation)}, {"fields", fields}};

  out.criteria.push_back({9, "heat, bernstein and pag checks", heat_ok && bern_ok && pag_ok,
                          {{"plane_wave_c_hat", jnum(wave.c_hat)}, {"c_hat_tolerance", heat_tol},
                           {"bernstein_trend_slope", jnum(bslope)}, {"bernstein_tolerance", btol},
                           {"pag_max_relative_variation", jnum(variation)}, {"pag_max_variation", max_var}}});

  PlotSpec plot;
  plot.title = "heat decay";
  plot.xlabel = "kappa lambda^2";
  plot.ylabel = "mean log ratio";
  plot.series.push_back({"plane wave", wave.x, wave.log_ratio});
  plot.series.push_back({"random annulus", rnd.x, rnd.log_ratio});
  out.plots.push_back({"heat.svg", plot});
  return out;
}

}  // namespace sewkit::exp
