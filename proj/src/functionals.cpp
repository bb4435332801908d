#include "sewkit/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sewkit/error.hpp"
#include "sewkit/parallel.hpp"
#include "sewkit/stats.hpp"

namespace sewkit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kDampingCacheLimit = std::size_t{1} << 22;
constexpr std::size_t kDirectPhaseModes = 64;
constexpr int kPhaseResync = 32;

long signed_of(std::size_t k, std::size_t n) {
  return k < n / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
}

long axis_of(long kp, std::size_t n) {
  const long half = static_cast<long>(n / 2);
  if (kp < -half || kp >= half) return -1;
  return kp >= 0 ? kp : kp + static_cast<long>(n);
}

// table[k + n/2] = exp(i k u y) for k in [-n/2, n/2].
void fill_powers(std::vector<cplx>& table, std::size_t n, double unit, double y) {
  const long half = static_cast<long>(n / 2);
  table.resize(n + 1);
  const cplx z = std::polar(1.0, unit * y);
  cplx acc = 1.0;
  table[static_cast<std::size_t>(half)] = 1.0;
  for (long k = 1; k <= half; ++k) {
    acc = (k % kPhaseResync == 0) ? std::polar(1.0, unit * y * static_cast<double>(k)) : acc * z;
    table[static_cast<std::size_t>(half + k)] = acc;
    table[static_cast<std::size_t>(half - k)] = std::conj(acc);
  }
}

}  // namespace

const char* profile_kind_name(TimeProfile::Kind kind) {
  switch (kind) {
    case TimeProfile::Kind::constant: return "constant";
    case TimeProfile::Kind::plane_wave: return "plane_wave";
    case TimeProfile::Kind::gaussian_bump: return "gaussian_bump";
    case TimeProfile::Kind::dirac: return "dirac";
    case TimeProfile::Kind::besov_random: return "besov_random";
  }
  return "unknown";
}

SpectralField TimeProfile::spatial(const GridSpec& spec) const {
  spec.validate();
  SpectralField g(spec);
  auto c = g.coeffs();
  switch (kind) {
    case Kind::constant:
      c[0] = amplitude;
      break;
    case Kind::plane_wave: {
      const double unit = kPi / spec.half_period;
      long idx[2] = {0, 0};
      for (int a = 0; a < spec.dim; ++a) {
        const double k = lambda[static_cast<std::size_t>(a)] / unit;
        require(std::abs(k - std::round(k)) < 1e-9, ErrorCode::off_grid,
                "plane_wave: frequency is not a grid frequency");
        idx[a] = axis_of(std::lround(k), spec.n);
        require(idx[a] >= 0, ErrorCode::domain, "plane_wave: frequency beyond the Nyquist range");
      }
      c[spec.dim == 1 ? std::size_t(idx[0]) : std::size_t(idx[0]) * spec.n + std::size_t(idx[1])] = amplitude;
      break;
    }
    case Kind::gaussian_bump: {
      require(sigma > 0, ErrorCode::invalid_argument, "gaussian_bump: sigma must be positive");
      const double c0 = amplitude * std::pow(2 * kPi * sigma * sigma, 0.5 * spec.dim) / spec.volume();
      for (std::size_t i = 0; i < c.size(); ++i) {
        const double e = 0.5 * sigma * sigma * spec.frequency_sq(i);
        if (e < 39.0) c[i] = c0 * std::exp(-e);  // below 1e-17 relative is dropped
      }
      break;
    }
    case Kind::dirac:
      return SpectralField::dirac(spec);
    case Kind::besov_random:
      return random_multi_block(spec, alpha, max_block, waves, seed);
  }
  return g;
}

cplx TimeProfile::evaluate(double x, double y) const {
  switch (kind) {
    case Kind::constant: return amplitude;
    case Kind::plane_wave: return amplitude * std::exp(cplx(0, lambda[0] * x + lambda[1] * y));
    case Kind::gaussian_bump: return amplitude * std::exp(-(x * x + y * y) / (2 * sigma * sigma));
    default: fail(ErrorCode::unsupported, std::string("no pointwise values for profile ") + profile_kind_name(kind));
  }
}

nlohmann::json TimeProfile::to_json() const {
  nlohmann::json j{{"kind", profile_kind_name(kind)}, {"amplitude", amplitude}};
  switch (kind) {
    case Kind::plane_wave: j["lambda"] = lambda; break;
    case Kind::gaussian_bump: j["sigma"] = sigma; break;
    case Kind::besov_random:
      j["alpha"] = alpha;
      j["max_block"] = max_block;
      j["waves"] = waves;
      j["seed"] = seed;
      break;
    default: break;
  }
  if (std::isinf(theta))
    j["theta"] = "inf";
  else
    j["theta"] = theta;
  return j;
}

TimeProfile TimeProfile::from_json(const nlohmann::json& doc) {
  TimeProfile f;
  try {
    const std::string kind = doc.value("kind", std::string("constant"));
    if (kind == "constant") f.kind = Kind::constant;
    else if (kind == "plane_wave") f.kind = Kind::plane_wave;
    else if (kind == "gaussian_bump") f.kind = Kind::gaussian_bump;
    else if (kind == "dirac") f.kind = Kind::dirac;
    else if (kind == "besov_random") f.kind = Kind::besov_random;
    else fail(ErrorCode::config, "unknown profile kind: " + kind);
    f.amplitude = doc.value("amplitude", f.amplitude);
    if (doc.contains("lambda")) {
      if (doc["lambda"].is_array()) {
        for (std::size_t a = 0; a < std::min<std::size_t>(2, doc["lambda"].size()); ++a)
          f.lambda[a] = doc["lambda"][a].get<double>();
      } else {
        f.lambda = {doc["lambda"].get<double>(), 0.0};
      }
    }
    f.sigma = doc.value("sigma", f.sigma);
    f.alpha = doc.value("alpha", f.alpha);
    f.max_block = doc.value("max_block", f.max_block);
    f.waves = doc.value("waves", f.waves);
    f.seed = doc.value("seed", f.seed);
    if (doc.contains("theta")) {
      const auto& t = doc["theta"];
      f.theta = t.is_string() && t.get<std::string>() == "inf" ? std::numeric_limits<double>::infinity()
                                                                : t.get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::config, std::string("profile: ") + e.what());
  }
  require(f.theta > 1, ErrorCode::config, "profile: theta must exceed 1");
  return f;
}

std::shared_ptr<const ModeSet> ModeSet::from_field(const SpectralField& g) {
  auto m = std::make_shared<ModeSet>();
  m->spec = g.spec();
  auto c = g.coeffs();
  const std::size_t n = g.spec().n;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == cplx{}) continue;
    m->index.push_back(i);
    if (g.spec().dim == 1)
      m->signed_index.push_back({signed_of(i, n), 0});
    else
      m->signed_index.push_back({signed_of(i / n, n), signed_of(i % n, n)});
    m->xi_sq.push_back(g.spec().frequency_sq(i));
    m->base.push_back(c[i]);
  }
  return m;
}

ModalField::ModalField(std::shared_ptr<const ModeSet> modes) : modes_(std::move(modes)) {
  c_.assign(modes_->index.size(), cplx{});
}

SpectralField ModalField::to_spectral() const {
  SpectralField out(modes_->spec);
  for (std::size_t k = 0; k < c_.size(); ++k) out.coeffs()[modes_->index[k]] = c_[k];
  return out;
}

ModalField& ModalField::operator+=(const ModalField& o) {
  if (!modes_) *this = ModalField(o.modes_);
  require(modes_ == o.modes_ || modes_->index == o.modes_->index, ErrorCode::invalid_argument,
          "modal fields over different mode sets");
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}

ModalField& ModalField::operator-=(const ModalField& o) {
  if (!modes_) *this = ModalField(o.modes_);
  require(modes_ == o.modes_ || modes_->index == o.modes_->index, ErrorCode::invalid_argument,
          "modal fields over different mode sets");
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

ModalField& ModalField::operator*=(double c) {
  for (auto& v : c_) v *= c;
  return *this;
}

double value_norm(const ModalField& f) {
  if (!f.modes()) return 0.0;
  double s = 0;
  for (const auto& c : f.coeffs()) s += std::norm(c);
  return std::sqrt(s * f.modes()->spec.volume());
}

FunctionalGerm::FunctionalGerm(const TimeProfile& f, const GridSpec& spec, const FbmPath& path)
    : profile_(f), path_(&path), hurst_(path.params().hurst) {
  require(static_cast<std::size_t>(spec.dim) == path.dim(), ErrorCode::invalid_argument,
          "functional: grid dimension must match the path dimension");
  modes_ = ModeSet::from_field(f.spatial(spec));
}

const std::vector<double>& FunctionalGerm::damping(std::size_t cells) const {
  if (damping_.size() <= cells) {
    damping_.resize(cells + 1);
  }
  auto& row = damping_[cells];
  if (row.empty()) {
    const double r = rho(hurst_, 0.0, static_cast<double>(cells) * path_->dt());
    row.resize(modes_->xi_sq.size());
    for (std::size_t k = 0; k < row.size(); ++k) row[k] = std::exp(-0.5 * r * modes_->xi_sq[k]);
  }
  return row;
}

void FunctionalGerm::accumulate_cell(ModalField& out, double weight, const double* damp,
                                     const double* position) const {
  const ModeSet& m = *modes_;
  auto c = out.coeffs();
  const std::size_t K = m.index.size();
  const GridSpec& spec = m.spec;
  const double unit = kPi / spec.half_period;
  if (K <= kDirectPhaseModes) {
    for (std::size_t k = 0; k < K; ++k) {
      double phase = unit * static_cast<double>(m.signed_index[k][0]) * position[0];
      if (spec.dim == 2) phase += unit * static_cast<double>(m.signed_index[k][1]) * position[1];
      c[k] += (weight * damp[k]) * m.base[k] * std::polar(1.0, phase);
    }
    return;
  }
  const long half = static_cast<long>(spec.n / 2);
  fill_powers(scratch_[0], spec.n, unit, position[0]);
  if (spec.dim == 2) fill_powers(scratch_[1], spec.n, unit, position[1]);
  for (std::size_t k = 0; k < K; ++k) {
    cplx ph = scratch_[0][static_cast<std::size_t>(m.signed_index[k][0] + half)];
    if (spec.dim == 2) ph *= scratch_[1][static_cast<std::size_t>(m.signed_index[k][1] + half)];
    c[k] += (weight * damp[k]) * m.base[k] * ph;
  }
}

ModalField FunctionalGerm::germ(std::size_t i, std::size_t k) const {
  require(i <= k && k <= path_->steps(), ErrorCode::domain, "functional germ: need s <= t on the path grid");
  ModalField out(modes_);
  const std::size_t len = k - i;
  if (len == 0) return out;
  const std::size_t d = path_->dim();
  std::vector<double> means(d * len);
  for (std::size_t c = 0; c < d; ++c) path_->conditional_means(c, i, std::span<double>(means.data() + c * len, len));
  const double dt = path_->dt();
  const bool cache = modes_->index.size() * (len + 1) <= kDampingCacheLimit;
  std::vector<double> scratch;
  double pos[2] = {0.0, 0.0};
  for (std::size_t l = 0; l < len; ++l) {
    const std::size_t cells = (l == 0 && profile_.singular()) ? 1 : l;
    const double* damp;
    if (cache) {
      damp = damping(cells).data();
    } else {
      const double r = rho(hurst_, 0.0, static_cast<double>(cells) * dt);
      scratch.resize(modes_->xi_sq.size());
      for (std::size_t m = 0; m < scratch.size(); ++m) scratch[m] = std::exp(-0.5 * r * modes_->xi_sq[m]);
      damp = scratch.data();
    }
    for (std::size_t c = 0; c < d; ++c) pos[c] = means[c * len + l];
    accumulate_cell(out, dt * profile_.weight(path_->time(i + l)), damp, pos);
  }
  return out;
}

ModalField FunctionalGerm::germ_at(double s, double t) const {
  require(s <= t, ErrorCode::domain, "functional germ: need s <= t");
  return germ(path_->grid_index(s), path_->grid_index(t));
}

ModalField FunctionalGerm::riemann(const Partition& pi) const {
  ModalField out(modes_);
  auto pts = pi.points();
  std::vector<std::size_t> idx;
  for (double p : pts) idx.push_back(path_->grid_index(p));
  for (std::size_t a = 0; a + 1 < idx.size(); ++a) out += germ(idx[a], idx[a + 1]);
  return out;
}

ModalField FunctionalGerm::reference(std::size_t k) const {
  require(k <= path_->steps(), ErrorCode::domain, "functional reference: time beyond the horizon");
  ModalField out(modes_);
  const double* damp = damping(0).data();
  double pos[2] = {0.0, 0.0};
  for (std::size_t l = 0; l < k; ++l) {
    for (std::size_t c = 0; c < path_->dim(); ++c) pos[c] = path_->value(c, l);
    accumulate_cell(out, path_->dt() * profile_.weight(path_->time(l)), damp, pos);
  }
  return out;
}

ModalField FunctionalGerm::reference_at(double t) const { return reference(path_->grid_index(t)); }

Germ<ModalField> FunctionalGerm::as_germ() const {
  return Germ<ModalField>{[this](double s, double t) { return germ_at(s, t); }, zero()};
}

GridFunction germ_value(const TimeProfile& f, const GridSpec& spec, const FbmPath& path, double s, double t) {
  return FunctionalGerm(f, spec, path).germ_at(s, t).to_grid();
}

GridFunction functional_riemann(const TimeProfile& f, const GridSpec& spec, const FbmPath& path,
                                const Partition& pi) {
  return FunctionalGerm(f, spec, path).riemann(pi).to_grid();
}

GridFunction functional_reference(const TimeProfile& f, const GridSpec& spec, const FbmPath& path, double t) {
  return FunctionalGerm(f, spec, path).reference_at(t).to_grid();
}

double ExponentBudget::time_exponent(double gamma) const {
  return 1.0 - hurst * gamma - (std::isinf(theta) ? 0.0 : 1.0 / theta);
}

nlohmann::json ExponentBudget::to_json() const {
  auto num = [](double x) -> nlohmann::json {
    if (std::isinf(x)) return "inf";
    return x;
  };
  nlohmann::json j{{"hurst", hurst},        {"dim", dim},
                   {"theta", num(theta)},   {"alpha", alpha},
                   {"p", num(p)},           {"q", num(q)},
                   {"p_hat", p_hat},        {"gamma_max", gamma_max},
                   {"beta_max", beta_max},  {"gamma_positive", gamma_positive},
                   {"beta_positive", beta_positive}};
  j["dirac_v_range"] = dirac_range_valid
                           ? nlohmann::json{{"min", v_min}, {"max", num(v_max)}, {"max_inclusive", v_max_inclusive}}
                           : nlohmann::json(nullptr);
  return j;
}

ExponentBudget regularity_budget(double hurst, int dim, double theta, double alpha, double p, double q) {
  require(hurst > 0 && hurst < 1, ErrorCode::invalid_argument, "budget: H must lie in (0,1)");
  require(dim >= 1, ErrorCode::invalid_argument, "budget: dimension must be >= 1");
  require(theta > 1 && p > 1 && q > 1, ErrorCode::invalid_argument, "budget: theta, p, q must exceed 1");
  ExponentBudget b;
  b.hurst = hurst;
  b.dim = dim;
  b.theta = theta;
  b.alpha = alpha;
  b.p = p;
  b.q = q;
  b.p_hat = std::min({2.0, theta, p, q});
  b.gamma_max = (1.0 - 1.0 / b.p_hat) / hurst;
  const double m3 = std::min({2.0, theta, p});
  b.beta_max = alpha - dim / p + (1.0 - 1.0 / m3) / hurst;
  b.gamma_positive = b.gamma_max > 0;
  b.beta_positive = b.beta_max > 0;
  const double hd = hurst * dim;
  if (theta >= 2 && hd < 1) {
    b.dirac_range_valid = true;
    b.v_min = 2.0;
    if (hd < 0.5) {
      b.v_max = std::numeric_limits<double>::infinity();
      b.v_max_inclusive = true;
    } else if (hd == 0.5) {
      b.v_max = std::numeric_limits<double>::infinity();
      b.v_max_inclusive = false;
    } else {
      b.v_max = 2 * hd / (2 * hd - 1);
      b.v_max_inclusive = false;
    }
  }
  return b;
}

RegularityProbeReport regularity_probe(const RegularityProbeConfig& cfg) {
  require(!cfg.gammas.empty(), ErrorCode::invalid_argument, "regularity_probe: empty gamma grid");
  require(cfg.spatial_n.size() >= 2, ErrorCode::degenerate, "regularity_probe: need at least two grid sizes");
  require(cfg.paths >= 1, ErrorCode::invalid_argument, "regularity_probe: need at least one path");
  cfg.besov.validate();
  FbmSimulator sim(cfg.fbm);
  const std::size_t G = cfg.gammas.size(), N = cfg.spatial_n.size();
  // values[path][k][g]
  std::vector<std::vector<std::vector<double>>> values(cfg.paths,
                                                       std::vector<std::vector<double>>(N, std::vector<double>(G)));
  const Partition fine = Partition::uniform(0.0, cfg.fbm.horizon, cfg.fbm.steps);
  parallel_for(cfg.paths, cfg.workers, [&](std::size_t k) {
    FbmPath path = sim.simulate_stream(cfg.seed, k);
    for (std::size_t a = 0; a < N; ++a) {
      GridSpec spec{static_cast<int>(cfg.fbm.dim), cfg.spatial_n[a], cfg.half_period};
      FunctionalGerm germ(cfg.profile, spec, path);
      SpectralField I = germ.riemann(fine).to_spectral();
      std::vector<double> norms = block_norms(I, cfg.besov.p);
      for (std::size_t g = 0; g < G; ++g)
        values[k][a][g] = besov_from_block_norms(norms, cfg.besov.alpha + cfg.gammas[g], cfg.besov.q);
    }
  });
  RegularityProbeReport r;
  r.gammas = cfg.gammas;
  r.spatial_n = cfg.spatial_n;
  r.stat.assign(G, std::vector<double>(N));
  std::vector<double> logn;
  for (std::size_t n : cfg.spatial_n) logn.push_back(std::log2(static_cast<double>(n)));
  for (std::size_t g = 0; g < G; ++g) {
    std::vector<double> logs;
    for (std::size_t a = 0; a < N; ++a) {
      std::vector<double> col(cfg.paths);
      for (std::size_t k = 0; k < cfg.paths; ++k) col[k] = values[k][a][g];
      r.stat[g][a] = moment_norm(col, cfg.moment);
      logs.push_back(std::log2(r.stat[g][a]));
    }
    const double slope = fit_line(logn, logs).slope;
    r.slopes.push_back(slope);
    r.trend.push_back(std::abs(slope) < cfg.stable_slope ? "stable"
                      : slope > cfg.upward_slope         ? "upward"
                                                         : "inconclusive");
  }
  return r;
}

OccupationResult occupation_check(const FbmPath& path, const TimeProfile& g, const GridSpec& spec,
                                  const Partition& pi) {
  require(pi.size() >= 1 && pi.front() == 0.0, ErrorCode::invalid_argument,
          "occupation_check: partition must start at 0");
  TimeProfile dirac;
  dirac.kind = TimeProfile::Kind::dirac;
  FunctionalGerm germ(dirac, spec, path);
  ModalField I = germ.riemann(pi);
  SpectralField gh = g.spatial(spec);
  const ModeSet& modes = germ.modes();
  OccupationResult r;
  for (std::size_t k = 0; k < modes.index.size(); ++k) {
    const long a = axis_of(-modes.signed_index[k][0], spec.n);
    const long b = spec.dim == 2 ? axis_of(-modes.signed_index[k][1], spec.n) : 0;
    if (a < 0 || b < 0) continue;
    const std::size_t idx = spec.dim == 1 ? std::size_t(a) : std::size_t(a) * spec.n + std::size_t(b);
    r.pairing += I.coeffs()[k] * gh.coeffs()[idx];
  }
  r.pairing *= spec.volume();
  const std::size_t kt = pi.size() >= 2 ? path.grid_index(pi.back()) : 0;
  for (std::size_t l = 0; l < kt; ++l) {
    const double x = -path.value(0, l);
    const double y = spec.dim == 2 ? -path.value(1, l) : 0.0;
    r.direct += path.dt() * g.evaluate(x, y);
  }
  r.residual = std::abs(r.pairing - r.direct) / std::max(std::abs(r.direct), 1e-300);
  if (kt == 0) r.residual = std::abs(r.pairing - r.direct);
  return r;
}

}  // namespace sewkit
