#include "sewkit/mtype.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sewkit/error.hpp"

namespace sewkit {

namespace {

void check_coins(std::size_t coins) {
  require(coins <= kMaxTreeCoins, ErrorCode::budget, "tree too deep for exhaustive enumeration");
}

double pnorm_pow(std::span<const double> x, double p) {
  double s = 0;
  for (double v : x) s += std::pow(std::abs(v), p);
  return s;
}

// ( mean |x|^m )^{1/m} with m = inf giving the max.
double lm_of(std::span<const double> x, double m) {
  if (std::isinf(m)) {
    double best = 0;
    for (double v : x) best = std::max(best, std::abs(v));
    return best;
  }
  double s = 0;
  for (double v : x) s += std::pow(std::abs(v), m);
  return std::pow(s / static_cast<double>(x.size()), 1.0 / m);
}

// Norms |X|_V at the nodes of one level.
std::vector<double> node_norms(std::span<const double> values, std::size_t dim, double p) {
  std::vector<double> out(values.size() / dim);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = lp_vector_norm(values.subspan(i * dim, dim), p);
  return out;
}

// || ||X|G||_m ||_n for per-node norms at a level with 2^level nodes, G the
// first g coins.
double conditional_norm(std::span<const double> norms, std::size_t level, std::size_t g, double m, double n) {
  const std::size_t block = std::size_t{1} << (level - g);
  std::vector<double> cond(std::size_t{1} << g);
  for (std::size_t a = 0; a < cond.size(); ++a) cond[a] = lm_of(norms.subspan(a * block, block), m);
  return lm_of(cond, n);
}

// Repeats node values of level `from` down to level `to`.
std::vector<double> lift(std::span<const double> values, std::size_t dim, std::size_t from, std::size_t to) {
  const std::size_t rep = std::size_t{1} << (to - from);
  std::vector<double> out(values.size() * rep);
  const std::size_t nodes = values.size() / dim;
  for (std::size_t i = 0; i < nodes; ++i)
    for (std::size_t r = 0; r < rep; ++r)
      std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(i * dim), dim,
                  out.begin() + static_cast<std::ptrdiff_t>((i * rep + r) * dim));
  return out;
}

}  // namespace

double lp_vector_norm(std::span<const double> x, double p) {
  if (std::isinf(p)) {
    double best = 0;
    for (double v : x) best = std::max(best, std::abs(v));
    return best;
  }
  return std::pow(pnorm_pow(x, p), 1.0 / p);
}

std::vector<double> cond_expectation(std::span<const double> values, std::size_t dim) {
  require(dim >= 1 && values.size() % (2 * dim) == 0, ErrorCode::invalid_argument,
          "cond_expectation: level size must be an even number of nodes");
  std::vector<double> out(values.size() / 2);
  const std::size_t parents = out.size() / dim;
  for (std::size_t i = 0; i < parents; ++i)
    for (std::size_t c = 0; c < dim; ++c)
      out[i * dim + c] = 0.5 * (values[(2 * i) * dim + c] + values[(2 * i + 1) * dim + c]);
  return out;
}

TreeMartingale TreeMartingale::from_leaves(std::size_t depth, std::size_t dim, double p, std::vector<double> leaves) {
  check_coins(depth);
  require(leaves.size() == (std::size_t{1} << depth) * dim, ErrorCode::invalid_argument,
          "tree martingale: wrong number of leaf values");
  TreeMartingale f;
  f.depth = depth;
  f.dim = dim;
  f.p = p;
  f.levels.resize(depth + 1);
  f.levels[depth] = std::move(leaves);
  for (std::size_t h = depth; h > 0; --h) f.levels[h - 1] = cond_expectation(f.levels[h], dim);
  return f;
}

TreeMartingale TreeMartingale::sign_martingale(std::size_t depth, double p) {
  check_coins(depth);
  const std::size_t dim = std::max<std::size_t>(depth, 1);
  std::vector<double> leaves((std::size_t{1} << depth) * dim, 0.0);
  for (std::size_t leaf = 0; leaf < (std::size_t{1} << depth); ++leaf)
    for (std::size_t n = 0; n < depth; ++n) {
      // coin n (0-based, oldest first) sits at bit depth-1-n
      const bool heads = (leaf >> (depth - 1 - n)) & 1U;
      leaves[leaf * dim + n] = heads ? 1.0 : -1.0;
    }
  return from_leaves(depth, dim, p, std::move(leaves));
}

TreeMartingale TreeMartingale::random(std::size_t depth, std::size_t dim, double p, std::uint64_t seed,
                                      bool centered) {
  check_coins(depth);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> leaves((std::size_t{1} << depth) * dim);
  for (double& x : leaves) x = normal(rng);
  if (centered) {
    for (std::size_t c = 0; c < dim; ++c) {
      double mean = 0;
      for (std::size_t i = c; i < leaves.size(); i += dim) mean += leaves[i];
      mean /= static_cast<double>(leaves.size() / dim);
      for (std::size_t i = c; i < leaves.size(); i += dim) leaves[i] -= mean;
    }
  }
  return from_leaves(depth, dim, p, std::move(leaves));
}

double TreeMartingale::martingale_defect() const {
  double worst = 0;
  for (std::size_t h = 0; h < depth; ++h) {
    auto avg = cond_expectation(levels[h + 1], dim);
    for (std::size_t i = 0; i < avg.size(); ++i) worst = std::max(worst, std::abs(avg[i] - levels[h][i]));
  }
  return worst;
}

double type_ratio(const TreeMartingale& f, double p_hat, double m) {
  check_coins(f.depth);
  require(m > 1 && std::isfinite(m), ErrorCode::invalid_argument, "type_ratio: m must lie in (1, inf)");
  require(p_hat >= 1, ErrorCode::invalid_argument, "type_ratio: exponent must be >= 1");
  const std::size_t N = f.depth, leaves = std::size_t{1} << N;
  // per-node |df_h|^p_hat
  std::vector<std::vector<double>> inc(N + 1);
  inc[0] = {std::pow(lp_vector_norm(f.node(0, 0), f.p), p_hat)};
  std::vector<double> diff(f.dim);
  for (std::size_t h = 1; h <= N; ++h) {
    inc[h].resize(std::size_t{1} << h);
    for (std::size_t i = 0; i < inc[h].size(); ++i) {
      auto a = f.node(h, i), b = f.node(h - 1, i >> 1);
      for (std::size_t c = 0; c < f.dim; ++c) diff[c] = a[c] - b[c];
      inc[h][i] = std::pow(lp_vector_norm(diff, f.p), p_hat);
    }
  }
  double lhs = 0, rhs = 0;
  for (std::size_t leaf = 0; leaf < leaves; ++leaf) {
    lhs += std::pow(lp_vector_norm(f.node(N, leaf), f.p), m);
    double s = 0;
    for (std::size_t h = 0; h <= N; ++h) s += inc[h][leaf >> (N - h)];
    rhs += std::pow(s, m / p_hat);
  }
  if (rhs == 0) return lhs == 0 ? 1.0 : std::numeric_limits<double>::infinity();
  return std::pow(lhs / rhs, 1.0 / m);
}

double pythagorean_gap(const TreeMartingale& f) {
  const std::size_t N = f.depth;
  auto mean_sq = [&](std::size_t h, auto&& value) {
    double s = 0;
    const std::size_t nodes = std::size_t{1} << h;
    for (std::size_t i = 0; i < nodes; ++i) s += value(i);
    return s / static_cast<double>(nodes);
  };
  auto sq = [](std::span<const double> x) {
    double s = 0;
    for (double v : x) s += v * v;
    return s;
  };
  const double lhs = mean_sq(N, [&](std::size_t i) { return sq(f.node(N, i)); });
  double rhs = sq(f.node(0, 0));
  std::vector<double> diff(f.dim);
  for (std::size_t h = 1; h <= N; ++h)
    rhs += mean_sq(h, [&](std::size_t i) {
      auto a = f.node(h, i), b = f.node(h - 1, i >> 1);
      for (std::size_t c = 0; c < f.dim; ++c) diff[c] = a[c] - b[c];
      return sq(diff);
    });
  return lhs > 0 ? std::abs(lhs - rhs) / lhs : std::abs(lhs - rhs);
}

TreeSequence random_tree_sequence(std::size_t g_coins, std::size_t steps, std::size_t dim, double p,
                                  double drift_scale, std::uint64_t seed) {
  check_coins(g_coins + steps);
  require(dim >= 1, ErrorCode::invalid_argument, "tree sequence: dimension must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::bernoulli_distribution keep(0.5);
  TreeSequence seq;
  seq.g_coins = g_coins;
  seq.steps = steps;
  seq.dim = dim;
  seq.p = p;
  seq.y.resize(steps + 1);
  seq.y[0].resize((std::size_t{1} << g_coins) * dim);
  for (double& x : seq.y[0]) x = normal(rng);
  for (std::size_t k = 1; k <= steps; ++k) {
    const std::size_t parents = std::size_t{1} << (g_coins + k - 1);
    seq.y[k].resize(2 * parents * dim);
    for (std::size_t i = 0; i < parents; ++i) {
      for (std::size_t c = 0; c < dim; ++c) {
        const double drift = drift_scale * normal(rng);
        const double magnitude = keep(rng) ? normal(rng) : 0.0;
        seq.y[k][(2 * i) * dim + c] = drift + magnitude;
        seq.y[k][(2 * i + 1) * dim + c] = drift - magnitude;
      }
    }
  }
  return seq;
}

TreeSequence deterministic_tree_sequence(std::size_t g_coins, std::size_t steps, std::size_t dim, double p,
                                         std::uint64_t seed) {
  check_coins(g_coins + steps);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  TreeSequence seq;
  seq.g_coins = g_coins;
  seq.steps = steps;
  seq.dim = dim;
  seq.p = p;
  seq.y.resize(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    std::vector<double> v(dim);
    for (double& x : v) x = normal(rng);
    const std::size_t nodes = std::size_t{1} << (g_coins + k);
    seq.y[k].resize(nodes * dim);
    for (std::size_t i = 0; i < nodes; ++i) std::copy(v.begin(), v.end(), seq.y[k].begin() + static_cast<std::ptrdiff_t>(i * dim));
  }
  return seq;
}

double DoobTerms::ratio(double C) const {
  const double rhs = drift + 2 * C * noise;
  if (rhs == 0) return lhs == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

double DoobTerms::minimal_constant() const {
  if (lhs <= drift) return 0.0;
  if (noise == 0) return std::numeric_limits<double>::infinity();
  return (lhs - drift) / (2 * noise);
}

DoobTerms doob_terms(const TreeSequence& seq, double p_hat, double m, double n) {
  const std::size_t g = seq.g_coins, N = seq.steps, dim = seq.dim;
  check_coins(g + N);
  require(seq.y.size() == N + 1, ErrorCode::invalid_argument, "tree sequence: need N+1 terms");
  require(p_hat >= 1 && m >= p_hat && n >= p_hat, ErrorCode::invalid_argument,
          "doob inequality: need m, n >= p_hat >= 1");
  DoobTerms t;
  std::vector<double> total((std::size_t{1} << (g + N)) * dim, 0.0);
  double noise_pow = 0;
  for (std::size_t k = 0; k <= N; ++k) {
    const std::size_t level = g + k;
    require(seq.y[k].size() == (std::size_t{1} << level) * dim, ErrorCode::invalid_argument,
            "tree sequence: y_k has the wrong number of nodes");
    auto lifted = lift(seq.y[k], dim, level, g + N);
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += lifted[i];
    noise_pow += std::pow(conditional_norm(node_norms(seq.y[k], dim, seq.p), level, g, m, n), p_hat);
    if (k >= 1) {
      auto pred = cond_expectation(seq.y[k], dim);
      t.drift += conditional_norm(node_norms(pred, dim, seq.p), level - 1, g, m, n);
    }
  }
  t.lhs = conditional_norm(node_norms(total, dim, seq.p), g + N, g, m, n);
  t.noise = std::pow(noise_pow, 1.0 / p_hat);
  return t;
}

double doob_ineq_ratio(const TreeSequence& seq, double p_hat, double m, double n, double C) {
  return doob_terms(seq, p_hat, m, n).ratio(C);
}

double doob_split_error(const TreeSequence& seq) {
  const std::size_t g = seq.g_coins, N = seq.steps, dim = seq.dim, leaf_level = g + N;
  const std::size_t size = (std::size_t{1} << leaf_level) * dim;
  std::vector<double> sum(size, 0.0), drift(size, 0.0), mart(size, 0.0);
  for (std::size_t k = 0; k <= N; ++k) {
    auto y = lift(seq.y[k], dim, g + k, leaf_level);
    for (std::size_t i = 0; i < size; ++i) sum[i] += y[i];
    if (k == 0) {
      for (std::size_t i = 0; i < size; ++i) mart[i] += y[i];
      continue;
    }
    auto pred = lift(cond_expectation(seq.y[k], dim), dim, g + k - 1, leaf_level);
    for (std::size_t i = 0; i < size; ++i) {
      drift[i] += pred[i];
      mart[i] += y[i] - pred[i];
    }
  }
  double worst = 0;
  std::vector<double> diff(dim);
  for (std::size_t leaf = 0; leaf < (std::size_t{1} << leaf_level); ++leaf) {
    for (std::size_t c = 0; c < dim; ++c) {
      const std::size_t i = leaf * dim + c;
      diff[c] = sum[i] - (drift[i] + mart[i]);
    }
    worst = std::max(worst, lp_vector_norm(diff, seq.p));
  }
  return worst;
}

}  // namespace sewkit
