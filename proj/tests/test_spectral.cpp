#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "sewkit/error.hpp"
#include "sewkit/spectral.hpp"

using namespace sewkit;

namespace {

GridSpec line(std::size_t n, double L) { return GridSpec{1, n, L}; }

double max_diff(const GridFunction& a, const GridFunction& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

}  // namespace

TEST_CASE("grid geometry") {
  GridSpec s = line(8, 4.0);
  CHECK(s.h() == doctest::Approx(1.0));
  CHECK(s.node(0) == doctest::Approx(-4.0));
  CHECK(s.frequency(1) == doctest::Approx(std::numbers::pi / 4));
  CHECK(s.frequency(7) == doctest::Approx(-std::numbers::pi / 4));
  CHECK(s.frequency(4) == doctest::Approx(-std::numbers::pi));
  GridSpec sq{2, 8, 4.0};
  CHECK(sq.size() == 64);
  CHECK(sq.volume() == doctest::Approx(64.0));
  CHECK(sq.frequency_sq(1 * 8 + 2) == doctest::Approx(std::pow(std::numbers::pi / 4, 2) * 5));
  CHECK_THROWS_AS((GridSpec{3, 8, 1.0}.validate()), Error);
  CHECK_THROWS_AS((GridSpec{1, 0, 1.0}.validate()), Error);
  GridSpec back = GridSpec::from_json(sq.to_json());
  CHECK(back == sq);
}

TEST_CASE("fourier round trip and parseval") {
  GridSpec s = line(64, 3.0);
  auto g = GridFunction::from_function(s, [](double x, double) { return cplx(std::exp(-x * x), std::sin(x)); });
  CHECK(max_diff(g.spectrum().to_grid(), g) < 1e-13);
  CHECK(value_norm(g.spectrum()) == doctest::Approx(value_norm(g)).epsilon(1e-12));
}

TEST_CASE("plane waves and diracs") {
  GridSpec s = line(32, std::numbers::pi);
  auto w = GridFunction::plane_wave(s, {3.0, 0.0}, cplx(0, 2)).spectrum();
  for (std::size_t k = 0; k < 32; ++k) {
    cplx want = k == 3 ? cplx(0, 2) : cplx(0);
    CHECK(std::abs(w.coeffs()[k] - want) < 1e-13);
  }
  auto d = GridFunction::dirac(s).spectrum();
  auto dd = SpectralField::dirac(s);
  for (std::size_t k = 0; k < 32; ++k) {
    CHECK(std::abs(d.coeffs()[k] - 1.0 / (2 * std::numbers::pi)) < 1e-13);
    CHECK(std::abs(dd.coeffs()[k] - d.coeffs()[k]) < 1e-13);
  }
}

TEST_CASE("lp norms") {
  GridSpec s = line(16, 2.0);
  auto one = GridFunction::constant(s, 1.0);
  CHECK(lp_norm(one, 2.0) == doctest::Approx(2.0));
  CHECK(lp_norm(one, 3.0) == doctest::Approx(std::cbrt(4.0)));
  CHECK(lp_norm(GridFunction::constant(s, cplx(3, 4)), std::numeric_limits<double>::infinity()) ==
        doctest::Approx(5.0));
}

TEST_CASE("heat semigroup") {
  GridSpec s = line(32, std::numbers::pi);
  auto w = GridFunction::plane_wave(s, {5.0, 0.0});
  auto hw = heat_convolve(w, 0.1);
  CHECK(hw.values()[7].real() == doctest::Approx(std::exp(-0.1 * 25 / 2) * w.values()[7].real()));

  // Gaussian of variance v spreads to variance v + kappa.
  GridSpec wide = line(512, 20.0);
  const double v = 0.5, kappa = 0.3;
  auto gauss = [](double var) {
    return [var](double x, double) { return cplx(std::exp(-x * x / (2 * var)) / std::sqrt(2 * std::numbers::pi * var)); };
  };
  auto out = heat_convolve(GridFunction::from_function(wide, gauss(v)), kappa);
  CHECK(max_diff(out, GridFunction::from_function(wide, gauss(v + kappa))) < 1e-12);
  CHECK(max_diff(heat_convolve(out, 0.0), out) == 0.0);
}

TEST_CASE("shift") {
  GridSpec s = line(128, 8.0);
  auto f = [](double x, double) { return cplx(std::exp(-x * x)); };
  std::vector<double> y{0.7};
  auto moved = shift(GridFunction::from_function(s, f), y);
  auto want = GridFunction::from_function(s, [&](double x, double) { return f(x + 0.7, 0); });
  CHECK(max_diff(moved, want) < 1e-10);
}

TEST_CASE("littlewood-paley blocks") {
  for (double xi : {0.0, 0.3, 1.0, 1.7, 3.3, 9.0, 100.0}) {
    double total = 0;
    for (int j = -1; j <= 10; ++j) total += block_symbol(j, xi);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(block_symbol(3, 1.0) == 0.0);
  CHECK(block_symbol(-1, 0.0) == 1.0);

  GridSpec s = line(64, std::numbers::pi);
  auto w = GridFunction::plane_wave(s, {5.0, 0.0});
  double sum = 0;
  for (int j = -1; j <= max_block(s); ++j) {
    auto b = lp_block(w, j);
    sum += b.value.values()[3].real();
    CHECK(b.value.values()[3].real() == doctest::Approx(block_symbol(j, 5.0) * w.values()[3].real()).epsilon(1e-12));
  }
  CHECK(sum == doctest::Approx(w.values()[3].real()).epsilon(1e-12));
  CHECK(lp_block(w, max_block(s) + 1).beyond_nyquist);
}

TEST_CASE("besov norm from blocks") {
  GridSpec s = line(128, 8.0);
  auto g = GridFunction::from_function(s, [](double x, double) { return cplx(std::exp(-x * x) * std::cos(3 * x)); });
  auto norms = block_norms(g.spectrum(), 2.0);
  double want = 0;
  for (std::size_t i = 0; i < norms.size(); ++i) {
    double term = std::pow(2.0, 0.5 * (static_cast<double>(i) - 1)) * norms[i];
    want += term * term;
  }
  CHECK(besov_norm(g, BesovIndices{0.5, 2, 2}) == doctest::Approx(std::sqrt(want)).epsilon(1e-12));
  double sup = 0;
  for (std::size_t i = 0; i < norms.size(); ++i) sup = std::max(sup, std::pow(2.0, -(double(i) - 1)) * norms[i]);
  CHECK(besov_from_block_norms(norms, -1.0, std::numeric_limits<double>::infinity()) == doctest::Approx(sup));
  CHECK_THROWS_AS((BesovIndices{0, 0.5, 2}.validate()), Error);
}

TEST_CASE("bernstein ratio of a plane wave") {
  GridSpec s = line(64, std::numbers::pi);
  auto w = GridFunction::plane_wave(s, {6.0, 0.0}).spectrum();
  CHECK(bernstein_ratio(w, 6.0, 1, 2, 2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bernstein_ratio(w, 6.0, 2, 3, 3) == doctest::Approx(1.0).epsilon(1e-12));
  auto rep = bernstein_check(s, 6.0, 1, 2, 2, 8, 3);
  CHECK(rep.trials == 8);
  CHECK(rep.max_ratio <= 1.0 + 1e-12);
}

TEST_CASE("random fields") {
  GridSpec s = line(128, 8.0);
  auto a = random_band_limited(s, 4.0, 9), b = random_band_limited(s, 4.0, 9);
  for (std::size_t k = 0; k < s.size(); ++k) {
    CHECK(a.coeffs()[k] == b.coeffs()[k]);
    if (std::abs(s.frequency(k)) > 4.0) CHECK(a.coeffs()[k] == cplx(0));
  }
  // Modes do not depend on the grid size.
  auto small = random_multi_block(line(64, 8.0), 0.0, 2, 2, 4);
  auto big = random_multi_block(line(256, 8.0), 0.0, 2, 2, 4);
  CHECK(value_norm(small) == doctest::Approx(value_norm(big)).epsilon(1e-12));
}

TEST_CASE("heat decay of a plane wave is exact") {
  GridSpec s = line(64, std::numbers::pi);
  std::vector<double> kappas{0.0, 0.01, 0.02, 0.05};
  auto rep = heat_decay_check(s, 4.0, kappas, 2.0, AnnulusEnsemble::plane_wave, 1, 1);
  CHECK(rep.c_hat == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(rep.C_hat == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("binary grid files") {
  auto dir = std::filesystem::temp_directory_path() / "sewkit_test_grid";
  std::filesystem::create_directories(dir);
  GridSpec s{2, 8, 2.5};
  auto g = GridFunction::from_function(s, [](double x, double y) { return cplx(x + 2 * y, x * y); });
  auto path = (dir / "g.bin").string();
  write_grid_binary(path, g);
  CHECK(std::filesystem::file_size(path) == 4 + 4 * 3 + 8 + 64 * 8);
  auto back = read_grid_binary(path);
  CHECK(back.spec() == s);
  CHECK(max_diff(back, g) < 1e-5);

  std::ofstream(dir / "bad.bin") << "nope";
  try {
    read_grid_binary((dir / "bad.bin").string());
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io);
  }
  std::filesystem::remove_all(dir);
}
