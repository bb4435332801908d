#include "sewkit/sewkit.h"

#include <cstring>
#include <exception>
#include <memory>
#include <string>

#include <json.hpp>

#include "experiments/experiments.hpp"
#include "sewkit/control.hpp"
#include "sewkit/error.hpp"
#include "sewkit/fbm.hpp"
#include "sewkit/functionals.hpp"
#include "sewkit/mtype.hpp"
#include "sewkit/sewing.hpp"
#include "sewkit/spectral.hpp"

struct sewkit_control {
  sewkit::Control c;
};
struct sewkit_fbm_path {
  sewkit::FbmPath p;
};
struct sewkit_grid {
  sewkit::GridFunction g;
};

namespace {

thread_local std::string last_error;

template <class F>
int guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return SEWKIT_OK;
  } catch (const sewkit::Error& e) {
    last_error = e.what();
    return static_cast<int>(e.code());
  } catch (const nlohmann::json::exception& e) {
    last_error = e.what();
    return SEWKIT_CONFIG;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return SEWKIT_BUDGET;
  } catch (const std::exception& e) {
    last_error = e.what();
    return SEWKIT_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return SEWKIT_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  sewkit::require(p != nullptr, sewkit::ErrorCode::invalid_argument, std::string(what) + " is NULL");
}

int make_control(sewkit::Control c, sewkit_control** out) {
  *out = new sewkit_control{std::move(c)};
  return SEWKIT_OK;
}

}  // namespace

extern "C" {

const char* sewkit_last_error(void) { return last_error.c_str(); }

const char* sewkit_status_name(int status) {
  if (status < 0 || status > SEWKIT_INTERNAL) return "unknown";
  return sewkit::error_code_name(static_cast<sewkit::ErrorCode>(status));
}

const char* sewkit_version(void) { return "0.1.0"; }

int sewkit_control_linear(double horizon, sewkit_control** out) {
  return guarded([&] {
    need(out, "out");
    make_control(sewkit::Control::linear(horizon), out);
  });
}

int sewkit_control_power(double horizon, double scale, double kappa, sewkit_control** out) {
  return guarded([&] {
    need(out, "out");
    make_control(sewkit::Control::power(horizon, scale, kappa), out);
  });
}

int sewkit_control_besov_data(double horizon, const double* profile, size_t cells, double theta, double hurst,
                              double gamma, sewkit_control** out) {
  return guarded([&] {
    need(out, "out");
    need(profile, "profile");
    make_control(sewkit::Control::besov_data(horizon, std::vector<double>(profile, profile + cells), theta, hurst, gamma),
                 out);
  });
}

int sewkit_control_tabulated(double horizon, size_t n, const double* values, sewkit_control** out) {
  return guarded([&] {
    need(out, "out");
    need(values, "values");
    make_control(sewkit::Control::tabulated(horizon, n, std::vector<double>(values, values + (n + 1) * (n + 1))), out);
  });
}

int sewkit_control_from_json(const char* json, sewkit_control** out) {
  return guarded([&] {
    need(out, "out");
    need(json, "json");
    make_control(sewkit::Control::from_json(nlohmann::json::parse(json)), out);
  });
}

void sewkit_control_free(sewkit_control* c) { delete c; }

int sewkit_control_eval(const sewkit_control* c, double s, double t, double* out) {
  return guarded([&] {
    need(c, "control");
    need(out, "out");
    *out = c->c(s, t);
  });
}

int sewkit_control_midpoint(const sewkit_control* c, double s, double t, double* out) {
  return guarded([&] {
    need(c, "control");
    need(out, "out");
    *out = sewkit::w_midpoint(c->c, s, t);
  });
}

int sewkit_control_dyadic_points(const sewkit_control* c, double s, double t, int level, double* out,
                                 size_t capacity, size_t* count) {
  return guarded([&] {
    need(c, "control");
    auto pts = sewkit::dyadic_points(c->c, s, t, level);
    if (count) *count = pts.size();
    sewkit::require(out != nullptr && capacity >= pts.size(), sewkit::ErrorCode::invalid_argument,
                    "dyadic points: output buffer too small");
    std::memcpy(out, pts.data(), pts.size() * sizeof(double));
  });
}

int sewkit_control_mesh(const sewkit_control* c, const double* points, size_t n, double* out) {
  return guarded([&] {
    need(c, "control");
    need(out, "out");
    sewkit::require(n == 0 || points != nullptr, sewkit::ErrorCode::invalid_argument, "points is NULL");
    *out = n == 0 ? 0.0 : sewkit::mesh(c->c, sewkit::Partition(std::vector<double>(points, points + n)));
  });
}

int sewkit_control_check_superadditive(const sewkit_control* c, size_t grid_n, double* max_violation,
                                       double witness[3]) {
  return guarded([&] {
    need(c, "control");
    need(max_violation, "max_violation");
    auto r = sewkit::check_superadditive(c->c, grid_n);
    *max_violation = r.max_violation;
    if (witness)
      for (int i = 0; i < 3; ++i) witness[i] = r.witness[static_cast<std::size_t>(i)];
  });
}

int sewkit_rate_bound(const sewkit_germ_bounds* b, const sewkit_control* c, double s, double t, double mesh_w,
                      double C, double* out) {
  return guarded([&] {
    need(b, "bounds");
    need(c, "control");
    need(out, "out");
    sewkit::GermBounds gb{b->gamma1, b->eps1, b->gamma2, b->eps2, b->gamma3, b->eps3, b->p_hat, b->m, b->n};
    *out = sewkit::rate_bound(gb, c->c, s, t, mesh_w, C);
  });
}

int sewkit_allocation_identity(const sewkit_control* c, const double* points, size_t n_points, const double* table,
                               double* lhs, double* rhs, double* relative_error) {
  return guarded([&] {
    need(c, "control");
    need(points, "points");
    need(table, "table");
    auto id = sewkit::allocation_identity([&](std::size_t i, std::size_t j) { return table[i * n_points + j]; },
                                          std::span<const double>(points, n_points), c->c);
    if (lhs) *lhs = id.lhs;
    if (rhs) *rhs = id.rhs;
    if (relative_error) *relative_error = id.relative_error;
  });
}

int sewkit_fbm_simulate(double hurst, size_t dim, double horizon, double past, size_t steps, uint64_t seed,
                        sewkit_fbm_path** out) {
  return guarded([&] {
    need(out, "out");
    sewkit::FbmParams fp;
    fp.hurst = hurst;
    fp.dim = dim;
    fp.horizon = horizon;
    fp.past = past;
    fp.steps = steps;
    sewkit::FbmSimulator sim(fp);
    *out = new sewkit_fbm_path{sim.simulate(seed)};
  });
}

void sewkit_fbm_free(sewkit_fbm_path* p) { delete p; }

size_t sewkit_fbm_steps(const sewkit_fbm_path* p) { return p ? p->p.steps() : 0; }

int sewkit_fbm_value(const sewkit_fbm_path* p, size_t coord, double t, double* out) {
  return guarded([&] {
    need(p, "path");
    need(out, "out");
    sewkit::require(coord < p->p.dim(), sewkit::ErrorCode::invalid_argument, "coordinate out of range");
    *out = p->p.value_at(coord, t);
  });
}

int sewkit_fbm_conditional_mean(const sewkit_fbm_path* p, size_t coord, double u, double v, double* out) {
  return guarded([&] {
    need(p, "path");
    need(out, "out");
    sewkit::require(coord < p->p.dim(), sewkit::ErrorCode::invalid_argument, "coordinate out of range");
    *out = p->p.conditional_mean_at(coord, u, v);
  });
}

int sewkit_fbm_write_csv(const sewkit_fbm_path* p, const char* path) {
  return guarded([&] {
    need(p, "path");
    need(path, "file path");
    FILE* f = std::fopen(path, "wb");
    sewkit::require(f != nullptr, sewkit::ErrorCode::io, std::string("cannot open ") + path);
    const std::string csv = p->p.to_csv();
    const bool ok = std::fwrite(csv.data(), 1, csv.size(), f) == csv.size();
    std::fclose(f);
    sewkit::require(ok, sewkit::ErrorCode::io, std::string("write failed: ") + path);
  });
}

int sewkit_rho(double hurst, double u, double v, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = sewkit::rho(hurst, u, v);
  });
}

int sewkit_grid_create(int dim, size_t n, double half_period, const double* re, const double* im,
                       sewkit_grid** out) {
  return guarded([&] {
    need(out, "out");
    sewkit::GridSpec spec{dim, n, half_period};
    spec.validate();
    std::vector<sewkit::cplx> v(spec.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = {re ? re[i] : 0.0, im ? im[i] : 0.0};
    *out = new sewkit_grid{sewkit::GridFunction(spec, std::move(v))};
  });
}

int sewkit_grid_dirac(int dim, size_t n, double half_period, sewkit_grid** out) {
  return guarded([&] {
    need(out, "out");
    sewkit::GridSpec spec{dim, n, half_period};
    spec.validate();
    *out = new sewkit_grid{sewkit::GridFunction::dirac(spec)};
  });
}

void sewkit_grid_free(sewkit_grid* g) { delete g; }

size_t sewkit_grid_size(const sewkit_grid* g) { return g ? g->g.size() : 0; }

int sewkit_grid_values(const sewkit_grid* g, double* re, double* im, size_t capacity) {
  return guarded([&] {
    need(g, "grid");
    sewkit::require(capacity >= g->g.size(), sewkit::ErrorCode::invalid_argument, "grid values: buffer too small");
    auto v = g->g.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (re) re[i] = v[i].real();
      if (im) im[i] = v[i].imag();
    }
  });
}

int sewkit_grid_heat(const sewkit_grid* g, double kappa, sewkit_grid** out) {
  return guarded([&] {
    need(g, "grid");
    need(out, "out");
    sewkit::require(kappa >= 0, sewkit::ErrorCode::domain, "heat: kappa must be >= 0");
    *out = new sewkit_grid{sewkit::heat_convolve(g->g, kappa)};
  });
}

int sewkit_grid_shift(const sewkit_grid* g, const double* y, sewkit_grid** out) {
  return guarded([&] {
    need(g, "grid");
    need(y, "y");
    need(out, "out");
    *out = new sewkit_grid{
        sewkit::shift(g->g, std::span<const double>(y, static_cast<std::size_t>(g->g.spec().dim)))};
  });
}

int sewkit_grid_lp_block(const sewkit_grid* g, int j, sewkit_grid** out, int* beyond_nyquist) {
  return guarded([&] {
    need(g, "grid");
    need(out, "out");
    auto r = sewkit::lp_block(g->g, j);
    if (beyond_nyquist) *beyond_nyquist = r.beyond_nyquist ? 1 : 0;
    *out = new sewkit_grid{std::move(r.value)};
  });
}

int sewkit_grid_besov_norm(const sewkit_grid* g, double alpha, double p, double q, double* out) {
  return guarded([&] {
    need(g, "grid");
    need(out, "out");
    *out = sewkit::besov_norm(g->g, sewkit::BesovIndices{alpha, p, q});
  });
}

int sewkit_grid_write_binary(const sewkit_grid* g, const char* path) {
  return guarded([&] {
    need(g, "grid");
    need(path, "file path");
    sewkit::write_grid_binary(path, g->g);
  });
}

int sewkit_grid_read_binary(const char* path, sewkit_grid** out) {
  return guarded([&] {
    need(path, "file path");
    need(out, "out");
    *out = new sewkit_grid{sewkit::read_grid_binary(path)};
  });
}

int sewkit_grid_write_csv(const sewkit_grid* g, const char* path) {
  return guarded([&] {
    need(g, "grid");
    need(path, "file path");
    const std::string csv = g->g.to_csv();
    FILE* f = std::fopen(path, "wb");
    sewkit::require(f != nullptr, sewkit::ErrorCode::io, std::string("cannot open ") + path);
    const bool ok = std::fwrite(csv.data(), 1, csv.size(), f) == csv.size();
    std::fclose(f);
    sewkit::require(ok, sewkit::ErrorCode::io, std::string("write failed: ") + path);
  });
}

int sewkit_regularity_budget(double hurst, int dim, double theta, double alpha, double p, double q,
                             double* gamma_max, double* beta_max, double* p_hat) {
  return guarded([&] {
    auto b = sewkit::regularity_budget(hurst, dim, theta, alpha, p, q);
    if (gamma_max) *gamma_max = b.gamma_max;
    if (beta_max) *beta_max = b.beta_max;
    if (p_hat) *p_hat = b.p_hat;
  });
}

int sewkit_sign_martingale_type_ratio(size_t depth, double p, double p_hat, double m, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = sewkit::type_ratio(sewkit::TreeMartingale::sign_martingale(depth, p), p_hat, m);
  });
}

const char* sewkit_experiment_names(void) {
  static const std::string names = [] {
    std::string s;
    for (const auto& e : sewkit::exp::registry()) s += std::string(s.empty() ? "" : ",") + e.name;
    return s;
  }();
  return names.c_str();
}

int sewkit_run_experiment(const char* name, const char* config_json, const uint64_t* seed, const char* out_dir,
                          unsigned workers, char* summary, size_t capacity, size_t* summary_len) {
  return guarded([&] {
    need(name, "name");
    need(out_dir, "out_dir");
    nlohmann::json cfg = nlohmann::json::object();
    if (config_json && *config_json) {
      try {
        cfg = nlohmann::json::parse(config_json);
      } catch (const nlohmann::json::parse_error& e) {
        sewkit::fail(sewkit::ErrorCode::config, std::string("config is not valid JSON: ") + e.what());
      }
    }
    auto out = sewkit::exp::run_experiment(name, cfg, seed, workers);
    sewkit::exp::write_outputs(out, name, out_dir);
    const std::string text = out.summary(name).dump(2);
    if (summary_len) *summary_len = text.size();
    if (summary && capacity > 0) {
      const std::size_t n = std::min(capacity - 1, text.size());
      std::memcpy(summary, text.data(), n);
      summary[n] = '\0';
    }
  });
}

}  // extern "C"
