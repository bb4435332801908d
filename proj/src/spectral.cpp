#include "sewkit/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "fft.hpp"
#include "sewkit/error.hpp"
#include "sewkit/random.hpp"
#include "sewkit/stats.hpp"

namespace sewkit {

namespace {

constexpr double kPi = std::numbers::pi;

double bump(double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - x * x));
}

void check_same_spec(const GridSpec& a, const GridSpec& b) {
  require(a == b, ErrorCode::invalid_argument, "grid functions live on different grids");
}

double alternating_sign(const GridSpec& spec, std::size_t idx) {
  std::size_t parity = spec.dim == 1 ? idx : (idx / spec.n + idx % spec.n);
  return parity % 2 == 0 ? 1.0 : -1.0;
}

template <class F>
SpectralField apply_multiplier(const SpectralField& g, F&& symbol) {
  SpectralField out = g;
  auto c = out.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= symbol(i);
  return out;
}

// Signed index k' of axis index k.
long signed_index(std::size_t k, std::size_t n) {
  return k < n / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
}

// Axis index of signed k', or -1 when outside the grid.
long axis_index(long kp, std::size_t n) {
  const long half = static_cast<long>(n / 2);
  if (kp < -half || kp >= half) return -1;
  return kp >= 0 ? kp : kp + static_cast<long>(n);
}

}  // namespace

void GridSpec::validate() const {
  require(dim == 1 || dim == 2, ErrorCode::invalid_argument, "grid: dimension must be 1 or 2");
  require(n >= 2 && std::has_single_bit(n), ErrorCode::invalid_argument, "grid: n must be a power of two");
  require(half_period > 0 && std::isfinite(half_period), ErrorCode::invalid_argument, "grid: L must be positive");
}

double GridSpec::cell_volume() const { return dim == 1 ? h() : h() * h(); }
double GridSpec::volume() const { return std::pow(2 * half_period, dim); }

double GridSpec::frequency(std::size_t k) const {
  return kPi * static_cast<double>(signed_index(k, n)) / half_period;
}

std::array<double, 2> GridSpec::frequency_vec(std::size_t idx) const {
  if (dim == 1) return {frequency(idx), 0.0};
  return {frequency(idx / n), frequency(idx % n)};
}

double GridSpec::frequency_sq(std::size_t idx) const {
  auto f = frequency_vec(idx);
  return f[0] * f[0] + f[1] * f[1];
}

double GridSpec::max_frequency() const {
  return std::sqrt(static_cast<double>(dim)) * kPi * static_cast<double>(n / 2) / half_period;
}

nlohmann::json GridSpec::to_json() const { return {{"dim", dim}, {"n", n}, {"L", half_period}}; }

GridSpec GridSpec::from_json(const nlohmann::json& doc) {
  GridSpec s;
  try {
    s.dim = doc.value("dim", s.dim);
    s.n = doc.value("n", s.n);
    s.half_period = doc.value("L", s.half_period);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::config, std::string("grid: ") + e.what());
  }
  s.validate();
  return s;
}

GridFunction::GridFunction(const GridSpec& spec) : spec_(spec) {
  spec.validate();
  values_.assign(spec.size(), cplx{});
}

GridFunction::GridFunction(const GridSpec& spec, std::vector<cplx> values) : spec_(spec), values_(std::move(values)) {
  spec.validate();
  require(values_.size() == spec.size(), ErrorCode::invalid_argument, "grid function: wrong number of values");
}

GridFunction GridFunction::from_function(const GridSpec& spec, const std::function<cplx(double, double)>& fn) {
  GridFunction g(spec);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (spec.dim == 1)
      g.values_[i] = fn(spec.node(i), 0.0);
    else
      g.values_[i] = fn(spec.node(i / spec.n), spec.node(i % spec.n));
  }
  return g;
}

GridFunction GridFunction::constant(const GridSpec& spec, cplx c) {
  GridFunction g(spec);
  std::fill(g.values_.begin(), g.values_.end(), c);
  return g;
}

GridFunction GridFunction::plane_wave(const GridSpec& spec, std::array<double, 2> lambda, cplx amplitude) {
  return from_function(spec, [&](double x, double y) {
    return amplitude * std::exp(cplx(0, lambda[0] * x + (spec.dim == 2 ? lambda[1] * y : 0.0)));
  });
}

GridFunction GridFunction::dirac(const GridSpec& spec) {
  GridFunction g(spec);
  const std::size_t mid = spec.n / 2;
  const std::size_t idx = spec.dim == 1 ? mid : mid * spec.n + mid;
  g.values_[idx] = 1.0 / spec.cell_volume();
  return g;
}

SpectralField GridFunction::spectrum() const {
  std::vector<cplx> a = values_;
  fft::transform(a, spec_.dim, spec_.n, -1);
  const double scale = 1.0 / static_cast<double>(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= scale * alternating_sign(spec_, i);
  return SpectralField(spec_, std::move(a));
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
  check_same_spec(spec_, o.spec_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
  check_same_spec(spec_, o.spec_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

GridFunction& GridFunction::operator*=(double c) {
  for (auto& v : values_) v *= c;
  return *this;
}

std::string GridFunction::to_csv() const {
  require(spec_.dim == 1, ErrorCode::unsupported, "CSV export is for one-dimensional grids");
  std::ostringstream os;
  os.precision(17);
  os << "x,re,im\n";
  for (std::size_t i = 0; i < values_.size(); ++i)
    os << spec_.node(i) << ',' << values_[i].real() << ',' << values_[i].imag() << '\n';
  return os.str();
}

SpectralField::SpectralField(const GridSpec& spec) : spec_(spec) {
  spec.validate();
  coeffs_.assign(spec.size(), cplx{});
}

SpectralField::SpectralField(const GridSpec& spec, std::vector<cplx> coeffs)
    : spec_(spec), coeffs_(std::move(coeffs)) {
  spec.validate();
  require(coeffs_.size() == spec.size(), ErrorCode::invalid_argument, "spectral field: wrong number of modes");
}

SpectralField SpectralField::dirac(const GridSpec& spec) {
  return SpectralField(spec, std::vector<cplx>(spec.size(), cplx(1.0 / spec.volume(), 0.0)));
}

GridFunction SpectralField::to_grid() const {
  std::vector<cplx> a(coeffs_.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = coeffs_[i] * alternating_sign(spec_, i);
  fft::transform(a, spec_.dim, spec_.n, +1);
  return GridFunction(spec_, std::move(a));
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  if (coeffs_.empty()) *this = SpectralField(o.spec_);
  check_same_spec(spec_, o.spec_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  if (coeffs_.empty()) *this = SpectralField(o.spec_);
  check_same_spec(spec_, o.spec_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double c) {
  for (auto& v : coeffs_) v *= c;
  return *this;
}

double lp_norm(const GridFunction& g, double p) {
  require(p >= 1, ErrorCode::invalid_argument, "lp_norm: need p >= 1");
  auto v = g.values();
  if (std::isinf(p)) {
    double m = 0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
  }
  double s = 0;
  if (p == 2) {
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s * g.spec().cell_volume());
  }
  for (const auto& x : v) s += std::pow(std::abs(x), p);
  return std::pow(s * g.spec().cell_volume(), 1.0 / p);
}

double value_norm(const GridFunction& g) { return lp_norm(g, 2.0); }

double value_norm(const SpectralField& g) {
  double s = 0;
  for (const auto& c : g.coeffs()) s += std::norm(c);
  return std::sqrt(s * g.spec().volume());
}

SpectralField heat_convolve(const SpectralField& g, double kappa) {
  require(kappa >= 0, ErrorCode::domain, "heat_convolve: kappa must be nonnegative");
  if (kappa == 0) return g;
  const GridSpec& spec = g.spec();
  return apply_multiplier(g, [&](std::size_t i) { return std::exp(-0.5 * kappa * spec.frequency_sq(i)); });
}

GridFunction heat_convolve(const GridFunction& g, double kappa) {
  if (kappa == 0) {
    require(kappa >= 0, ErrorCode::domain, "heat_convolve: kappa must be nonnegative");
    return g;
  }
  return heat_convolve(g.spectrum(), kappa).to_grid();
}

SpectralField shift(const SpectralField& g, std::span<const double> y) {
  const GridSpec& spec = g.spec();
  require(y.size() >= static_cast<std::size_t>(spec.dim), ErrorCode::invalid_argument,
          "shift: vector dimension mismatch");
  return apply_multiplier(g, [&](std::size_t i) {
    auto f = spec.frequency_vec(i);
    double phase = f[0] * y[0] + (spec.dim == 2 ? f[1] * y[1] : 0.0);
    return std::polar(1.0, phase);
  });
}

GridFunction shift(const GridFunction& g, std::span<const double> y) {
  bool zero = std::all_of(y.begin(), y.end(), [](double v) { return v == 0.0; });
  if (zero) return g;
  return shift(g.spectrum(), y).to_grid();
}

double block_symbol(int j, double abs_xi) {
  require(j >= -1, ErrorCode::invalid_argument, "block index must be >= -1");
  if (j == -1) return abs_xi >= 1.0 ? 0.0 : 1.0 - block_symbol(0, abs_xi);
  if (abs_xi <= 0) return 0.0;
  const double l = std::log2(abs_xi);
  const double x = l - j;
  if (std::abs(x) >= 1.0) return 0.0;
  const double base = std::floor(l);
  double total = 0;
  for (int i = -1; i <= 1; ++i) total += bump(l - (base + i));
  total += bump(l - (base + 2));
  return bump(x) / total;
}

int max_block(const GridSpec& spec) {
  const double amax = spec.max_frequency();
  int j = -1;
  while (std::ldexp(1.0, j) < amax) ++j;  // 2^{(j+1)-1} < amax
  return j;
}

BlockResult lp_block(const GridFunction& g, int j) {
  BlockResult r;
  if (j > max_block(g.spec())) {
    r.value = GridFunction(g.spec());
    r.beyond_nyquist = true;
    return r;
  }
  r.value = lp_block(g.spectrum(), j).to_grid();
  return r;
}

SpectralField lp_block(const SpectralField& g, int j) {
  const GridSpec& spec = g.spec();
  return apply_multiplier(g, [&](std::size_t i) { return block_symbol(j, std::sqrt(spec.frequency_sq(i))); });
}

void BesovIndices::validate() const {
  require(p >= 1 && q >= 1, ErrorCode::invalid_argument, "Besov indices need p, q >= 1");
  require(std::isfinite(alpha), ErrorCode::invalid_argument, "Besov regularity must be finite");
}

std::vector<double> block_norms(const SpectralField& g, double p) {
  const GridSpec& spec = g.spec();
  const int jmax = max_block(spec);
  std::vector<double> out(static_cast<std::size_t>(jmax + 2), 0.0);
  auto c = g.coeffs();
  if (p == 2) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double e = std::norm(c[i]);
      if (e == 0) continue;
      const double a = std::sqrt(spec.frequency_sq(i));
      const int lo = a < 1 ? -1 : std::max(-1, static_cast<int>(std::floor(std::log2(a))) - 1);
      for (int j = lo; j <= std::min(jmax, lo + 3); ++j) {
        const double s = block_symbol(j, a);
        out[static_cast<std::size_t>(j + 1)] += s * s * e;
      }
    }
    for (double& v : out) v = std::sqrt(v * spec.volume());
    return out;
  }
  for (int j = -1; j <= jmax; ++j) out[static_cast<std::size_t>(j + 1)] = lp_norm(lp_block(g, j).to_grid(), p);
  return out;
}

double besov_from_block_norms(std::span<const double> norms, double alpha, double q) {
  require(q >= 1, ErrorCode::invalid_argument, "Besov summability q must be >= 1");
  double acc = 0;
  for (std::size_t k = 0; k < norms.size(); ++k) {
    const int j = static_cast<int>(k) - 1;
    const double term = std::exp2(j * alpha) * norms[k];
    if (std::isinf(q))
      acc = std::max(acc, term);
    else
      acc += std::pow(term, q);
  }
  return std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
}

double besov_norm(const SpectralField& g, const BesovIndices& b) {
  b.validate();
  return besov_from_block_norms(block_norms(g, b.p), b.alpha, b.q);
}

double besov_norm(const GridFunction& g, const BesovIndices& b) { return besov_norm(g.spectrum(), b); }

namespace {

// Visits signed modes (k1', k2') with |xi| <= radius in an order that does not
// depend on n; modes above the grid's Nyquist range are skipped after the
// draw so that coarser grids see the same values on shared modes.
template <class F>
void visit_ball(const GridSpec& spec, double radius, F&& fn) {
  const long K = static_cast<long>(std::floor(radius * spec.half_period / kPi + 1e-9));
  const double unit = kPi / spec.half_period;
  auto emit = [&](long a, long b) {
    const double r2 = unit * unit * double(a * a + b * b);
    if (r2 > radius * radius * (1 + 1e-12)) return;
    long ia = axis_index(a, spec.n);
    long ib = spec.dim == 2 ? axis_index(b, spec.n) : 0;
    std::ptrdiff_t idx = -1;
    if (ia >= 0 && ib >= 0) idx = spec.dim == 1 ? ia : ia * static_cast<long>(spec.n) + ib;
    fn(idx, std::sqrt(r2));
  };
  if (spec.dim == 1) {
    for (long k = -K; k <= K; ++k) emit(k, 0);
  } else {
    for (long a = -K; a <= K; ++a)
      for (long b = -K; b <= K; ++b) emit(a, b);
  }
}

}  // namespace

SpectralField random_band_limited(const GridSpec& spec, double lambda, std::uint64_t seed) {
  SpectralField g(spec);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  visit_ball(spec, lambda, [&](std::ptrdiff_t idx, double) {
    cplx z(normal(rng), normal(rng));
    if (idx >= 0) g.coeffs()[static_cast<std::size_t>(idx)] = z;
  });
  return g;
}

SpectralField random_annulus(const GridSpec& spec, int j, std::uint64_t seed) {
  SpectralField g(spec);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  visit_ball(spec, std::ldexp(1.0, j + 1), [&](std::ptrdiff_t idx, double a) {
    cplx z(normal(rng), normal(rng));
    if (idx >= 0) g.coeffs()[static_cast<std::size_t>(idx)] = z * block_symbol(j, a);
  });
  return g;
}

SpectralField random_multi_block(const GridSpec& spec, double alpha, int max_j, int waves, std::uint64_t seed) {
  SpectralField g(spec);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal;
  const double unit = kPi / spec.half_period;
  for (int j = 0; j <= max_j; ++j) {
    for (int w = 0; w < waves; ++w) {
      const double mag = std::ldexp(1.0, j) * (0.75 + 0.75 * unif(rng));
      const double angle = 2 * kPi * unif(rng);
      cplx amp = cplx(normal(rng), normal(rng)) * std::exp2(-j * alpha);
      long a, b = 0;
      if (spec.dim == 1) {
        a = std::lround((angle < kPi ? mag : -mag) / unit);
      } else {
        a = std::lround(mag * std::cos(angle) / unit);
        b = std::lround(mag * std::sin(angle) / unit);
      }
      long ia = axis_index(a, spec.n), ib = spec.dim == 2 ? axis_index(b, spec.n) : 0;
      require(ia >= 0 && ib >= 0, ErrorCode::domain, "random_multi_block: block frequency beyond the grid");
      std::size_t idx = spec.dim == 1 ? std::size_t(ia) : std::size_t(ia) * spec.n + std::size_t(ib);
      g.coeffs()[idx] += amp;
    }
  }
  return g;
}

double bernstein_ratio(const SpectralField& g, double lambda, int k, double p, double q) {
  require(k >= 0, ErrorCode::invalid_argument, "bernstein: derivative order must be >= 0");
  const GridSpec& spec = g.spec();
  const double gp = lp_norm(g.to_grid(), p);
  if (gp == 0) return 0.0;
  // Sum over ordered index sequences of |d_{i1}...d_{ik} g|^2, pointwise.
  std::vector<double> sq(spec.size(), 0.0);
  const std::size_t sequences = static_cast<std::size_t>(std::pow(spec.dim, k));
  for (std::size_t seq = 0; seq < sequences; ++seq) {
    std::array<int, 2> count{0, 0};
    std::size_t s = seq;
    for (int m = 0; m < k; ++m) {
      ++count[s % static_cast<std::size_t>(spec.dim)];
      s /= static_cast<std::size_t>(spec.dim);
    }
    SpectralField d = apply_multiplier(g, [&](std::size_t i) {
      auto f = spec.frequency_vec(i);
      return std::pow(cplx(0, f[0]), count[0]) * std::pow(cplx(0, f[1]), count[1]);
    });
    GridFunction dg = d.to_grid();
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] += std::norm(dg.values()[i]);
  }
  std::vector<cplx> mag(sq.size());
  for (std::size_t i = 0; i < sq.size(); ++i) mag[i] = std::sqrt(sq[i]);
  const double dq = lp_norm(GridFunction(spec, std::move(mag)), q);
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
  return dq / (std::pow(lambda, k + spec.dim * (inv_p - inv_q)) * gp);
}

BernsteinReport bernstein_check(const GridSpec& spec, double lambda, int k, double p, double q, std::size_t trials,
                                std::uint64_t seed) {
  require(p <= q, ErrorCode::invalid_argument, "bernstein: need p <= q");
  require(lambda > 0 && lambda < spec.max_frequency() / std::sqrt(double(spec.dim)), ErrorCode::domain,
          "bernstein: lambda must lie below the Nyquist frequency");
  BernsteinReport r;
  r.trials = trials;
  for (std::size_t t = 0; t < trials; ++t)
    r.max_ratio = std::max(r.max_ratio, bernstein_ratio(random_band_limited(spec, lambda, stream_seed(seed, t)),
                                                        lambda, k, p, q));
  return r;
}

HeatDecayReport heat_decay_check(const GridSpec& spec, double lambda, std::span<const double> kappas, double p,
                                 AnnulusEnsemble ensemble, std::size_t trials, std::uint64_t seed) {
  require(kappas.size() >= 2, ErrorCode::degenerate, "heat_decay_check: need at least two kappa values");
  require(lambda > 0 && 2 * lambda <= spec.max_frequency() / std::sqrt(double(spec.dim)) + 1e-12,
          ErrorCode::domain, "heat_decay_check: annulus must lie within the Nyquist range");
  std::vector<SpectralField> fields;
  if (ensemble == AnnulusEnsemble::plane_wave) {
    const double k = lambda * spec.half_period / kPi;
    require(std::abs(k - std::round(k)) < 1e-9, ErrorCode::off_grid,
            "heat_decay_check: lambda is not a grid frequency");
    fields.push_back(GridFunction::plane_wave(spec, {lambda, 0.0}).spectrum());
  } else {
    const double jl = std::log2(lambda);
    require(std::abs(jl - std::round(jl)) < 1e-12, ErrorCode::invalid_argument,
            "heat_decay_check: random annulus needs lambda = 2^j");
    for (std::size_t t = 0; t < std::max<std::size_t>(trials, 1); ++t)
      fields.push_back(random_annulus(spec, static_cast<int>(std::round(jl)), stream_seed(seed, t)));
  }
  std::vector<double> base;
  for (const auto& f : fields) base.push_back(lp_norm(f.to_grid(), p));
  HeatDecayReport r;
  for (double kappa : kappas) {
    double acc = 0;
    for (std::size_t t = 0; t < fields.size(); ++t)
      acc += std::log(lp_norm(heat_convolve(fields[t], kappa).to_grid(), p) / base[t]);
    r.x.push_back(kappa * lambda * lambda);
    r.log_ratio.push_back(acc / static_cast<double>(fields.size()));
  }
  LineFit fit = fit_line(r.x, r.log_ratio);
  r.c_hat = -fit.slope;
  r.C_hat = std::exp(fit.intercept);
  r.r2 = fit.r2;
  return r;
}

PagReport pag_check(const SpectralField& g, double alpha, double gamma, double p, double q,
                    std::span<const double> kappas) {
  require(gamma > 0, ErrorCode::invalid_argument, "pag_check: gamma must be positive");
  PagReport r;
  const double base = besov_norm(g, {alpha, p, std::numeric_limits<double>::infinity()});
  for (double kappa : kappas) {
    require(kappa > 0, ErrorCode::domain, "pag_check: kappa values must be positive");
    double stat = 0;
    if (base > 0)
      stat = besov_norm(heat_convolve(g, kappa), {alpha + gamma, p, q}) /
             ((1 + std::pow(kappa, -gamma / 2)) * base);
    r.stats.push_back(stat);
    if (stat > r.sup_stat) {
      r.sup_stat = stat;
      r.argmax_kappa = kappa;
    }
  }
  return r;
}

namespace {

template <class T>
void put(std::ostream& os, T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    os.write(bytes.data(), sizeof(T));
  } else {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
}

template <class T>
T get(std::istream& is) {
  std::array<char, sizeof(T)> bytes;
  is.read(bytes.data(), sizeof(T));
  require(static_cast<bool>(is), ErrorCode::io, "grid file is truncated");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  return std::bit_cast<T>(bytes);
}

}  // namespace

void write_grid_binary(const std::string& path, const GridFunction& g) {
  std::ofstream os(path, std::ios::binary);
  require(static_cast<bool>(os), ErrorCode::io, "cannot open " + path + " for writing");
  os.write("SWKG", 4);
  put<std::uint32_t>(os, 1);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(g.spec().dim));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(g.spec().n));
  put<double>(os, g.spec().half_period);
  for (const auto& v : g.values()) {
    put<float>(os, static_cast<float>(v.real()));
    put<float>(os, static_cast<float>(v.imag()));
  }
  require(static_cast<bool>(os), ErrorCode::io, "write failed: " + path);
}

GridFunction read_grid_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(static_cast<bool>(is), ErrorCode::io, "cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  require(is && std::memcmp(magic, "SWKG", 4) == 0, ErrorCode::io, "not a grid file: " + path);
  require(get<std::uint32_t>(is) == 1, ErrorCode::io, "unsupported grid file version");
  GridSpec spec;
  spec.dim = static_cast<int>(get<std::uint32_t>(is));
  spec.n = get<std::uint32_t>(is);
  spec.half_period = get<double>(is);
  try {
    spec.validate();
  } catch (const Error& e) {
    fail(ErrorCode::io, std::string("bad grid header: ") + e.what());
  }
  std::vector<cplx> v(spec.size());
  for (auto& x : v) {
    float re = get<float>(is), im = get<float>(is);
    x = cplx(re, im);
  }
  return GridFunction(spec, std::move(v));
}

}  // namespace sewkit
