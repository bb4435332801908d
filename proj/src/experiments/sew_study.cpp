#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <random>

#include "experiments/experiments.hpp"
#include "sewkit/control.hpp"
#include "sewkit/error.hpp"
#include "sewkit/fbm.hpp"
#include "sewkit/random.hpp"
#include "sewkit/sewing.hpp"
#include "sewkit/stats.hpp"

namespace sewkit::exp {

namespace {

constexpr double kTwoPi = 6.283185307179586;

struct ScalarFn {
  double (*f)(double);
  double (*df)(double);
};

const std::map<std::string, ScalarFn>& scalar_functions() {
  static const std::map<std::string, ScalarFn> table = {
      {"identity", {[](double t) { return t; }, [](double) { return 1.0; }}},
      {"square", {[](double t) { return t * t; }, [](double t) { return 2 * t; }}},
      {"sin", {[](double t) { return std::sin(kTwoPi * t); }, [](double t) { return kTwoPi * std::cos(kTwoPi * t); }}},
      {"cos", {[](double t) { return std::cos(kTwoPi * t); }, [](double t) { return -kTwoPi * std::sin(kTwoPi * t); }}},
      {"exp", {[](double t) { return std::exp(t); }, [](double t) { return std::exp(t); }}},
  };
  return table;
}

const ScalarFn& scalar_function(const std::string& name) {
  auto it = scalar_functions().find(name);
  if (it == scalar_functions().end()) fail(ErrorCode::config, "config.young: unknown function '" + name + "'");
  return it->second;
}

// Composite 5-point Gauss-Legendre.
double integrate(const std::function<double(double)>& h, double a, double b, int panels) {
  static const double x[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640, 0.9061798459386640};
  static const double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665, 0.2369268850561891,
                              0.2369268850561891};
  double total = 0;
  const double step = (b - a) / panels;
  for (int k = 0; k < panels; ++k) {
    const double mid = a + (k + 0.5) * step, half = step / 2;
    double acc = 0;
    for (int i = 0; i < 5; ++i) acc += w[i] * h(mid + half * x[i]);
    total += acc * half;
  }
  return total;
}

struct LevelStats {
  std::vector<double> signed_error;  // per path
  std::vector<double> drift_error;
  std::vector<double> mart_error;
  std::vector<double> split_error;
};

Criterion allocation_criterion(const json& checks, std::uint64_t seed, CsvTable& extra) {
  const auto tables = checks["allocation_tables"].get<std::size_t>();
  const auto max_points = checks["max_points"].get<std::size_t>();
  require(max_points >= 2, ErrorCode::config, "config.checks.max_points must be >= 2");
  std::mt19937_64 rng(stream_seed(seed, 0xA110CA7E));
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> profile(64);
  for (double& v : profile) v = std::abs(normal(rng)) + 0.05;
  const Control controls[3] = {Control::linear(1.0), Control::power(1.0, 1.0, 2.0),
                               Control::besov_data(1.0, profile, 2.0, 0.25, 1.0)};
  double worst = 0;
  std::size_t total_terms = 0;
  for (std::size_t k = 0; k < tables; ++k) {
    const Control& c = controls[k % 3];
    std::uniform_int_distribution<std::size_t> count(2, max_points);
    const std::size_t n = count(rng) + 1;
    std::vector<double> pts(n);
    for (double& v : pts) v = unif(rng);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<double> table(pts.size() * pts.size());
    for (double& v : table) v = normal(rng);
    const std::size_t stride = pts.size();
    AllocationIdentity id = allocation_identity(
        [&](std::size_t i, std::size_t j) { return table[i * stride + j]; }, pts, c, 200);
    worst = std::max(worst, id.relative_error);
    total_terms += id.terms;
    extra.add({"allocation", control_kind_name(c.kind()), num(pts.size() - 1), num(id.relative_error),
               num(static_cast<std::size_t>(id.terms)), num(id.deepest_level)});
  }
  Criterion crit;
  crit.id = 1;
  crit.name = "allocation identity";
  crit.pass = worst <= 1e-12;
  crit.detail = {{"tables", tables}, {"max_relative_error", jnum(worst)}, {"terms", total_terms}, {"tolerance", 1e-12}};
  return crit;
}

Criterion dyadic_criterion(const json& checks, std::uint64_t seed, CsvTable& extra) {
  const int level = checks["dyadic_level"].get<int>();
  std::mt19937_64 rng(stream_seed(seed, 0xD7AD1C));
  std::normal_distribution<double> normal;
  std::vector<double> profile(64);
  for (double& v : profile) v = std::abs(normal(rng)) + 0.05;
  const std::vector<std::pair<std::string, Control>> controls = {
      {"linear", Control::linear(1.0)},
      {"power", Control::power(1.0, 1.0, 2.0)},
      {"besov_data", Control::besov_data(1.0, profile, 2.0, 0.25, 1.0)},
      {"tabulated", Control::tabulate(1.0, 64, [](double s, double t) { return 2.0 * (t - s); })},
  };
  const std::pair<double, double> bases[2] = {{0.0, 1.0}, {0.2, 0.9}};
  double worst = -1.0;
  for (const auto& [name, c] : controls) {
    for (const auto& [s, t] : bases) {
      DyadicTree tree = dyadic_tree(c, s, t, level);
      const double whole = c(s, t);
      double slack = -1.0;
      for (int h = 0; h <= level; ++h) {
        const auto& pts = tree.levels[static_cast<std::size_t>(h)];
        const double bound = std::ldexp(whole, -h);
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) slack = std::max(slack, c(pts[i], pts[i + 1]) / bound - 1.0);
      }
      worst = std::max(worst, slack);
      extra.add({"dyadic", name, num(s) + ":" + num(t), num(slack), num(level), ""});
    }
  }
  Criterion crit;
  crit.id = 2;
  crit.name = "dyadic bound";
  crit.pass = worst <= 1e-9;
  crit.detail = {{"max_level", level}, {"max_relative_slack", jnum(worst)}, {"tolerance", 1e-9}};
  return crit;
}

}  // namespace

json sew_study_defaults() {
  return {
      {"germ", "ito"},
      {"horizon", 1.0},
      {"hurst", 0.5},
      {"past", 0.0},
      {"paths", std::size_t{2000}},
      {"level_min", 4},
      {"level_max", 10},
      {"young", {{"f", "cos"}, {"g", "exp"}, {"quadrature_panels", 4000}}},
      {"table", nullptr},
      {"checks", {{"enabled", true}, {"allocation_tables", std::size_t{200}}, {"max_points", std::size_t{64}},
                  {"dyadic_level", 12}}},
  };
}

Output run_sew_study(const json& cfg, const RunOptions& opt) {
  Output out;
  const std::string germ = cfg["germ"].get<std::string>();
  const double T = cfg["horizon"].get<double>();
  const int lmin = cfg["level_min"].get<int>(), lmax = cfg["level_max"].get<int>();
  require(lmin >= 0 && lmax >= lmin && lmax <= 20, ErrorCode::config, "config: need 0 <= level_min <= level_max <= 20");
  require(T > 0, ErrorCode::config, "config.horizon must be positive");
  const Control control = Control::linear(T);
  std::vector<Partition> parts;
  std::vector<double> meshes;
  for (int h = lmin; h <= lmax; ++h) {
    parts.push_back(dyadic_partition(control, 0.0, T, h));
    meshes.push_back(mesh(control, parts.back()));
  }
  const std::size_t nl = parts.size();

  FbmParams fp;
  fp.hurst = cfg["hurst"].get<double>();
  fp.horizon = T;
  fp.past = cfg["past"].get<double>();
  fp.steps = std::size_t{1} << lmax;
  const bool path_germ = germ == "ito" || germ == "fbm_square";
  if (path_germ) {
    try {
      fp.validate();
    } catch (const Error& e) {
      fail(ErrorCode::config, std::string("config: ") + e.what());
    }
  }
  if (germ == "ito")
    require(fp.hurst == 0.5, ErrorCode::config, "config: the ito germ is defined for hurst = 0.5");

  std::size_t contexts = 1;
  double young_reference = std::numeric_limits<double>::quiet_NaN();
  bool has_dm = false;

  if (path_germ) {
    contexts = cfg["paths"].get<std::size_t>();
    require(contexts >= 2, ErrorCode::config, "config.paths must be >= 2");
    has_dm = true;
  } else if (germ == "young") {
    const ScalarFn& f = scalar_function(cfg["young"]["f"].get<std::string>());
    const ScalarFn& g = scalar_function(cfg["young"]["g"].get<std::string>());
    young_reference = integrate([&](double u) { return f.f(u) * g.df(u); }, 0.0, T,
                                cfg["young"]["quadrature_panels"].get<int>());
  } else if (germ == "custom-table") {
    require(cfg["table"].is_object(), ErrorCode::config, "config.table: custom-table germ needs {n, values}");
  } else if (germ != "zero") {
    fail(ErrorCode::config, "config.germ: unknown germ '" + germ + "' (ito, young, fbm_square, zero, custom-table)");
  }

  FbmSimulator sim(path_germ ? fp : FbmParams{});
  std::vector<double> table_values;
  std::size_t table_n = 0;
  if (germ == "custom-table") {
    table_n = cfg["table"].at("n").get<std::size_t>();
    table_values = cfg["table"].at("values").get<std::vector<double>>();
    require(table_n >= 1 && table_values.size() == (table_n + 1) * (table_n + 1), ErrorCode::config,
            "config.table: values must hold (n+1)^2 entries");
    require((std::size_t{1} << lmax) <= table_n && table_n % (std::size_t{1} << lmax) == 0, ErrorCode::config,
            "config.table: n must be a multiple of 2^level_max");
  }

  std::vector<LevelStats> stats(nl);
  for (auto& s : stats) {
    s.signed_error.assign(contexts, 0.0);
    s.drift_error.assign(contexts, 0.0);
    s.mart_error.assign(contexts, 0.0);
    s.split_error.assign(contexts, 0.0);
  }
  std::vector<TraceRow> trace;
  double trace_value = 0.0, trace_extrapolated = 0.0;

  auto make_germ = [&](const FbmPath* path) -> Germ<double> {
    if (germ == "ito")
      return {[path](double s, double t) {
                const double bs = path->value_at(0, s);
                return bs * (path->value_at(0, t) - bs);
              },
              0.0};
    if (germ == "fbm_square")
      return {[path](double s, double t) {
                const double bs = path->value_at(0, s), bt = path->value_at(0, t);
                return bt * bt - bs * bs;
              },
              0.0};
    if (germ == "young") {
      const ScalarFn& f = scalar_function(cfg["young"]["f"].get<std::string>());
      const ScalarFn& g = scalar_function(cfg["young"]["g"].get<std::string>());
      return {[f, g](double s, double t) { return f.f(s) * (g.f(t) - g.f(s)); }, 0.0};
    }
    if (germ == "custom-table") {
      const double step = T / static_cast<double>(table_n);
      return {[&, step](double s, double t) {
                const double x = s / step, y = t / step;
                const auto i = static_cast<std::size_t>(std::llround(x)), j = static_cast<std::size_t>(std::llround(y));
                require(std::abs(x - static_cast<double>(i)) < 1e-9 && std::abs(y - static_cast<double>(j)) < 1e-9,
                        ErrorCode::off_grid, "custom-table germ evaluated off its grid");
                return table_values[i * (table_n + 1) + j];
              },
              0.0};
    }
    return {[](double, double) { return 0.0; }, 0.0};
  };

  auto cond_mean_for = [&](const FbmPath* path) -> std::function<double(double, double)> {
    const double H = fp.hurst;
    if (germ == "ito")
      return [path](double s, double t) {
        const double bs = path->value_at(0, s);
        return bs * (path->conditional_mean_at(0, s, t) - bs);
      };
    return [path, H](double s, double t) {
      const double bs = path->value_at(0, s), m = path->conditional_mean_at(0, s, t);
      return m * m + rho(H, s, t) - bs * bs;
    };
  };

  parallel_for(contexts, opt.workers, [&](std::size_t ctx) {
    std::unique_ptr<FbmPath> path;
    if (path_germ) path = std::make_unique<FbmPath>(sim.simulate_stream(opt.seed, ctx));
    Germ<double> g = make_germ(path.get());
    double reference = 0.0;
    if (germ == "ito") {
      const double b = path->values(0).back();
      reference = (b * b - T) / 2;
    } else if (germ == "fbm_square") {
      const double b = path->values(0).back();
      reference = b * b;
    } else if (germ == "young") {
      reference = young_reference;
    }
    if (ctx == 0) {
      SewResult<double> res = sew(g, control, T, lmax);
      trace = res.trace;
      trace_value = res.value;
      trace_extrapolated = res.extrapolated;
      if (germ == "custom-table") reference = res.extrapolated;
    }
    for (std::size_t k = 0; k < nl; ++k) {
      const double sum = riemann_sum(g, parts[k]);
      stats[k].signed_error[ctx] = sum - reference;
      if (!has_dm) continue;
      DoobMeyerSums<double> dm = doob_meyer_sums(g, cond_mean_for(path.get()), parts[k]);
      stats[k].split_error[ctx] = std::abs(dm.martingale + dm.drift - sum) / std::max(1.0, std::abs(sum));
      const double b = path->values(0).back();
      if (fp.hurst == 0.5) {
        const double drift_expected = germ == "ito" ? 0.0 : T;
        const double mart_expected = germ == "ito" ? sum : b * b - T;
        stats[k].drift_error[ctx] = std::abs(dm.drift - drift_expected);
        stats[k].mart_error[ctx] = std::abs(dm.martingale - mart_expected) / std::max(1.0, std::abs(mart_expected));
      }
    }
  });
  out.results.header = {"level", "mesh_w", "rms_error", "mean_error", "se_error", "max_drift_error",
                        "max_martingale_error", "max_split_error"};
  std::vector<double> rmse(nl);
  for (std::size_t k = 0; k < nl; ++k) {
    const auto& s = stats[k];
    rmse[k] = rms(s.signed_error);
    const double se = contexts > 1 ? standard_error(s.signed_error) : 0.0;
    auto maxof = [](const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); };
    out.results.add({num(lmin + static_cast<int>(k)), num(meshes[k]), num(rmse[k]), num(mean(s.signed_error)), num(se),
                     has_dm ? num(maxof(s.drift_error)) : "nan", has_dm ? num(maxof(s.mart_error)) : "nan",
                     has_dm ? num(maxof(s.split_error)) : "nan"});
  }

  std::size_t nonzero = 0;
  for (double e : rmse) nonzero += e > 1e-12;
  double slope = std::numeric_limits<double>::quiet_NaN();
  std::string fit_note;
  if (nl < 3) {
    fit_note = "degenerate: fewer than three levels";
  } else if (nonzero < 2) {
    fit_note = nonzero == 0 ? "degenerate: exact" : "degenerate: too few nonzero errors";
  } else {
    slope = fit_loglog(meshes, rmse).slope;
  }
  out.metrics["germ"] = germ;
  out.metrics["slope"] = jnum(slope);
  if (!fit_note.empty()) {
    out.metrics["fit"] = fit_note;
    out.notes.push_back(fit_note);
  }
  out.metrics["levels"] = {lmin, lmax};
  out.metrics["contexts"] = contexts;
  out.metrics["sewn_value_first_context"] = jnum(trace_value);
  out.metrics["extrapolated_first_context"] = jnum(trace_extrapolated);
  bool non_decaying = trace_non_decaying(trace);
  out.metrics["trace_non_decaying"] = non_decaying;

  const auto& finest = stats.back();
  const double mean_err = mean(finest.signed_error);
  const double se_err = contexts > 1 ? standard_error(finest.signed_error) : 0.0;
  out.metrics["finest_rms_error"] = jnum(rmse.back());
  out.metrics["finest_mean_error"] = jnum(mean_err);
  out.metrics["finest_standard_error"] = jnum(se_err);

  if (germ == "ito") {
    const bool mean_ok = std::abs(mean_err) <= 3 * se_err;
    const bool slope_ok = std::isfinite(slope) && std::abs(slope - 0.5) <= 0.15;
    out.criteria.push_back({4, "ito sewing", mean_ok && slope_ok,
                            {{"mean_error", jnum(mean_err)}, {"standard_error", jnum(se_err)},
                             {"rms_error", jnum(rmse.back())}, {"slope", jnum(slope)}, {"expected_slope", 0.5},
                             {"slope_tolerance", 0.15}}});
  }
  if (has_dm) {
    double drift = 0, mart = 0, split = 0;
    for (const auto& s : stats)
      for (std::size_t c = 0; c < contexts; ++c) {
        drift = std::max(drift, s.drift_error[c]);
        mart = std::max(mart, s.mart_error[c]);
        split = std::max(split, s.split_error[c]);
      }
    out.metrics["doob_meyer"] = {{"max_drift_error", jnum(drift)}, {"max_martingale_error", jnum(mart)},
                                 {"max_split_error", jnum(split)}};
    if (germ == "fbm_square" && fp.hurst == 0.5)
      out.criteria.push_back({5, "doob-meyer sums", drift <= 1e-12 && mart <= 1e-12 && split <= 1e-12,
                              {{"max_drift_error", jnum(drift)}, {"max_martingale_error", jnum(mart)},
                               {"max_split_error", jnum(split)}, {"tolerance", 1e-12}}});
  }
  if (germ == "young") {
    const double err = std::abs(trace_extrapolated - young_reference);
    out.metrics["quadrature_reference"] = jnum(young_reference);
    out.metrics["extrapolation_error"] = jnum(err);
    out.metrics["finest_level_error"] = jnum(std::abs(trace_value - young_reference));
    out.criteria.push_back({6, "young sewing", std::isfinite(slope) && slope >= 0.85 && err <= 1e-6,
                            {{"slope", jnum(slope)}, {"min_slope", 0.85}, {"limit_error", jnum(err)},
                             {"tolerance", 1e-6}}});
  }

  CsvTable checks_table;
  checks_table.header = {"check", "control", "size", "relative_error", "terms_or_level", "deepest_level"};
  if (cfg["checks"]["enabled"].get<bool>()) {
    out.criteria.push_back(allocation_criterion(cfg["checks"], opt.seed, checks_table));
    out.criteria.push_back(dyadic_criterion(cfg["checks"], opt.seed, checks_table));
    out.files.push_back({"checks.csv", checks_table.render()});
  }

  CsvTable trace_csv;
  trace_csv.header = {"level", "mesh_w", "value_norm", "cauchy_diff"};
  for (const auto& r : trace)
    trace_csv.add({num(r.level), num(r.mesh_w), num(r.value_norm), num(r.cauchy_diff)});
  out.files.push_back({"trace.csv", trace_csv.render()});

  PlotSpec plot;
  plot.title = "sew-study: " + germ;
  plot.xlabel = "mesh_w";
  plot.ylabel = "RMS error";
  plot.log_x = plot.log_y = true;
  plot.series.push_back({"RMS error", meshes, rmse});
  if (std::isfinite(slope)) {
    const double c0 = rmse.back() / std::pow(meshes.back(), slope);
    std::vector<double> fit;
    for (double m : meshes) fit.push_back(c0 * std::pow(m, slope));
    plot.series.push_back({"fit slope " + num(std::round(slope * 1000) / 1000), meshes, fit});
  }
  out.plots.push_back({"error.svg", plot});
  return out;
}

}  // namespace sewkit::exp
