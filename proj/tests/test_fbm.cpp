#include <doctest.h>

#include <cmath>

#include "sewkit/error.hpp"
#include "sewkit/fbm.hpp"

using namespace sewkit;

namespace {

// B_j built term by term from the kernel tables.
double direct_value(const FbmPath& path, std::size_t j) {
  const auto& k = path.kernels();
  const std::size_t P = k.past_cells;
  auto inc = path.increments(0);
  double b = 0;
  for (std::size_t i = 0; i < j; ++i) b += k.future[j - i] * inc[P + i];
  for (std::size_t q = 1; q <= P; ++q) b += (k.past_avg[j + q] - k.past_avg[q]) * inc[P - q];
  return b;
}

}  // namespace

TEST_CASE("rho and variance closed forms") {
  CHECK(rho(0.5, 0.2, 0.7) == doctest::Approx(0.5));
  CHECK(rho(0.25, 0.0, 1.0) == doctest::Approx(2.0));
  CHECK(rho(0.75, 0.5, 1.0) == doctest::Approx(std::pow(0.5, 1.5) / 1.5));
  CHECK(mvn_variance(0.5, 0.3) == doctest::Approx(0.3));
  CHECK(mvn_variance(0.25, 2.0) == doctest::Approx(mvn_variance(0.25, 1.0) * std::sqrt(2.0)));
}

TEST_CASE("future coefficients reproduce rho exactly") {
  for (double H : {0.2, 0.5, 0.8}) {
    FbmParams p;
    p.hurst = H;
    p.steps = 64;
    auto k = FbmKernels::build(p);
    double acc = 0;
    for (std::size_t m = 1; m <= 64; ++m) {
      acc += k->future[m] * k->future[m] * p.dt();
      CHECK(acc == doctest::Approx(rho(H, 0, m * p.dt())).epsilon(1e-12));
    }
  }
}

TEST_CASE("brownian paths are cumulative sums") {
  FbmParams p;
  p.hurst = 0.5;
  p.steps = 100;
  FbmSimulator sim(p);
  FbmPath path = sim.simulate(3);
  auto inc = path.increments(0);
  const std::size_t P = path.kernels().past_cells;
  double acc = 0;
  for (std::size_t j = 1; j <= 100; ++j) {
    acc += inc[P + j - 1];
    CHECK(path.value(0, j) == doctest::Approx(acc).epsilon(1e-12));
  }
  CHECK(path.conditional_mean(0, 30, 90) == doctest::Approx(path.value(0, 30)));
}

TEST_CASE("values match the kernel sums") {
  for (std::size_t steps : {48u, 1500u}) {
    for (double H : {0.3, 0.7}) {
      FbmParams p;
      p.hurst = H;
      p.steps = steps;
      p.past = 2.0;
      FbmSimulator sim(p);
      FbmPath path = sim.simulate(17);
      CHECK(path.value(0, 0) == 0.0);
      for (std::size_t j : {std::size_t{1}, steps / 3, steps})
        CHECK(path.value(0, j) == doctest::Approx(direct_value(path, j)).epsilon(1e-9));
    }
  }
}

TEST_CASE("conditional mean drops the future increments") {
  FbmParams p;
  p.hurst = 0.3;
  p.steps = 64;
  p.dim = 2;
  FbmSimulator sim(p);
  FbmPath path = sim.simulate(5);
  const std::size_t P = path.kernels().past_cells;
  for (std::size_t i : {0u, 10u, 40u}) {
    std::vector<std::vector<double>> cut;
    for (std::size_t c = 0; c < 2; ++c) {
      auto inc = path.increments(c);
      std::vector<double> v(inc.begin(), inc.end());
      std::fill(v.begin() + static_cast<std::ptrdiff_t>(P + i), v.end(), 0.0);
      cut.push_back(std::move(v));
    }
    FbmPath frozen = sim.from_increments(cut);
    std::vector<double> batch(64 - i + 1);
    path.conditional_means(1, i, batch);
    for (std::size_t j = i; j <= 64; ++j) {
      CHECK(path.conditional_mean(0, i, j) == doctest::Approx(frozen.value(0, j)).epsilon(1e-10));
      CHECK(batch[j - i] == doctest::Approx(frozen.value(1, j)).epsilon(1e-10));
    }
    CHECK(path.conditional_mean(0, i, i) == doctest::Approx(path.value(0, i)));
  }
}

TEST_CASE("seeding is deterministic") {
  FbmParams p;
  p.hurst = 0.7;
  p.steps = 32;
  FbmSimulator sim(p);
  auto a = sim.simulate_stream(9, 2), b = sim.simulate_stream(9, 2), c = sim.simulate_stream(9, 3);
  CHECK(a.value(0, 32) == b.value(0, 32));
  CHECK(a.value(0, 32) != c.value(0, 32));
  CHECK(a.to_csv() == b.to_csv());
}

TEST_CASE("grid lookup and validation") {
  FbmParams p;
  p.steps = 8;
  p.hurst = 0.4;
  FbmSimulator sim(p);
  FbmPath path = sim.simulate(1);
  CHECK(path.grid_index(0.25) == 2);
  CHECK_THROWS_AS(path.grid_index(0.3), Error);
  try {
    path.grid_index(0.3);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::off_grid);
  }
  FbmParams bad = p;
  bad.hurst = 1.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = p;
  bad.steps = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  FbmParams back = FbmParams::from_json(p.to_json());
  CHECK(back.hurst == p.hurst);
  CHECK(back.steps == p.steps);
}

TEST_CASE("empirical variance is near the discrete value") {
  FbmParams p;
  p.hurst = 0.75;
  p.steps = 16;
  p.past = 4.0;
  FbmSimulator sim(p);
  const std::size_t n = 4000;
  double sum = 0, sq = 0;
  for (std::size_t k = 0; k < n; ++k) {
    double v = sim.simulate_stream(1, k).value(0, 16) - sim.simulate_stream(1, k).value(0, 8);
    sum += v;
    sq += v * v;
  }
  const double var = sq / n - (sum / n) * (sum / n);
  // Stationary increments: Var(B_1 - B_{1/2}) = c_H (1/2)^{2H}, up to truncation.
  CHECK(var == doctest::Approx(mvn_variance(0.75, 0.5)).epsilon(0.1));
}
