#include <doctest.h>

#include <cmath>

#include "sewkit/error.hpp"
#include "sewkit/mtype.hpp"

using namespace sewkit;

TEST_CASE("vector norms") {
  std::vector<double> x{3, -4};
  CHECK(lp_vector_norm(x, 2) == doctest::Approx(5));
  CHECK(lp_vector_norm(x, 1) == doctest::Approx(7));
  CHECK(lp_vector_norm(x, std::numeric_limits<double>::infinity()) == doctest::Approx(4));
}

TEST_CASE("conditional expectation on a tree level") {
  std::vector<double> level{1, 10, 3, 20, 5, 30, 7, 40};
  auto parent = cond_expectation(level, 2);
  REQUIRE(parent.size() == 4);
  CHECK(parent[0] == doctest::Approx(2));
  CHECK(parent[1] == doctest::Approx(15));
  CHECK(parent[2] == doctest::Approx(6));
  CHECK(parent[3] == doctest::Approx(35));
}

TEST_CASE("sign martingale type ratios") {
  for (std::size_t N : {2u, 4u, 8u}) {
    auto f = TreeMartingale::sign_martingale(N, 2.0);
    CHECK(f.martingale_defect() < 1e-14);
    CHECK(type_ratio(f, 2.0, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(type_ratio(f, 1.5, 2.0) == doctest::Approx(std::pow(double(N), 0.5 - 1 / 1.5)).epsilon(1e-12));
    auto g = TreeMartingale::sign_martingale(N, 1.5);
    CHECK(type_ratio(g, 1.5, 3.0) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("hilbert martingales are orthogonal") {
  auto f = TreeMartingale::random(10, 4, 2.0, 3, true);
  CHECK(f.martingale_defect() < 1e-12);
  CHECK(pythagorean_gap(f) < 1e-12);
  auto g = TreeMartingale::random(6, 2, 3.0, 4, false);
  CHECK(g.martingale_defect() < 1e-12);
  CHECK_THROWS_AS(TreeMartingale::random(kMaxTreeCoins + 1, 1, 2.0, 1, true), Error);
}

TEST_CASE("doob decomposition") {
  auto seq = random_tree_sequence(2, 6, 3, 2.0, 0.5, 11);
  CHECK(seq.y.size() == 7);
  CHECK(seq.y[3].size() == (std::size_t{1} << 5) * 3);
  CHECK(doob_split_error(seq) < 1e-12);
  auto t = doob_terms(seq, 2.0, 2.0, 4.0);
  CHECK(t.lhs > 0);
  const double C = t.minimal_constant();
  if (C > 0) CHECK(t.ratio(C) == doctest::Approx(1.0));

  // Nonrandom sequences: lhs <= |y_0| + drift, so C <= 1/2.
  auto det = deterministic_tree_sequence(1, 5, 2, 2.0, 3);
  auto d = doob_terms(det, 2.0, 2.0, 2.0);
  CHECK(d.minimal_constant() <= 0.5 + 1e-12);
  CHECK(doob_split_error(det) < 1e-12);
}
