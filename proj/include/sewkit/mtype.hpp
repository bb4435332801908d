#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sewkit {

inline constexpr std::size_t kMaxTreeCoins = 16;

// |x|_p on R^k; p = inf gives the max.
double lp_vector_norm(std::span<const double> x, double p);

// Parent values of a binary-tree level: the average of the two children.
// `values` holds 2^{h+1} nodes of `dim` coordinates each; the child of node
// i with coin c is node 2i + c.
std::vector<double> cond_expectation(std::span<const double> values, std::size_t dim);

// A martingale on the uniform coin tree of depth N with values in l^p(R^k).
// levels[h] holds the 2^h node values of f_h.
struct TreeMartingale {
  std::size_t depth = 0;
  std::size_t dim = 1;
  double p = 2.0;
  std::vector<std::vector<double>> levels;

  std::span<const double> node(std::size_t h, std::size_t i) const {
    return std::span<const double>(levels[h]).subspan(i * dim, dim);
  }

  // Builds f_h = E(f_N | F_h) from the leaf values.
  static TreeMartingale from_leaves(std::size_t depth, std::size_t dim, double p, std::vector<double> leaves);
  // f_h = sum_{n <= h} eps_n e_n in R^N.
  static TreeMartingale sign_martingale(std::size_t depth, double p);
  // Leaves with i.i.d. normal coordinates, shifted to mean zero when centered.
  static TreeMartingale random(std::size_t depth, std::size_t dim, double p, std::uint64_t seed, bool centered);

  // max |average of children - parent| over the tree
  double martingale_defect() const;
};

// |f_N|_{L_m(V)} / |(|f_0|^p_hat + sum_n |df_n|^p_hat)^{1/p_hat}|_{L_m} by
// enumeration of all leaves.
double type_ratio(const TreeMartingale& f, double p_hat, double m);

// | |f_N|^2_{L_2} - |f_0|^2 - sum_n |df_n|^2_{L_2} | relative to |f_N|^2_{L_2}.
double pythagorean_gap(const TreeMartingale& f);

// An adapted sequence y_0..y_N on a coin tree. The sub-sigma-field G is
// generated by the first `g_coins` coins and F_k by the first g_coins + k.
// y[k] holds 2^{g_coins+k} node values of `dim` coordinates.
struct TreeSequence {
  std::size_t g_coins = 0;
  std::size_t steps = 0;  // N
  std::size_t dim = 1;
  double p = 2.0;
  std::vector<std::vector<double>> y;
};

// Predictable drift plus sign noise with predictable magnitudes supported on
// a random subset of coordinates.
TreeSequence random_tree_sequence(std::size_t g_coins, std::size_t steps, std::size_t dim, double p,
                                  double drift_scale, std::uint64_t seed);
// y_k G-measurable and nonrandom: the same vector on every node.
TreeSequence deterministic_tree_sequence(std::size_t g_coins, std::size_t steps, std::size_t dim, double p,
                                         std::uint64_t seed);

struct DoobTerms {
  double lhs = 0.0;    // || ||sum_k y_k | G||_{V;m} ||_n
  double drift = 0.0;  // sum_{k>=1} || ||E_{k-1} y_k | G||_{V;m} ||_n
  double noise = 0.0;  // (sum_{k>=0} || ||y_k | G||_{V;m} ||_n^p_hat)^{1/p_hat}

  double ratio(double C) const;
  // Smallest C >= 0 with lhs <= drift + 2 C noise.
  double minimal_constant() const;
};

DoobTerms doob_terms(const TreeSequence& seq, double p_hat, double m, double n);
double doob_ineq_ratio(const TreeSequence& seq, double p_hat, double m, double n, double C);
// max over leaves of |sum_k y_k - (sum_{k>=1} E_{k-1} y_k + f_N)|_V where f is
// the martingale part of the Doob decomposition.
double doob_split_error(const TreeSequence& seq);

}  // namespace sewkit
