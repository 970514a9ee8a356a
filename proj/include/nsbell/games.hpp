#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nsbell/errors.hpp"
#include "nsbell/parallel.hpp"
#include "nsbell/prng.hpp"
#include "nsbell/rational_log.hpp"
#include "nsbell/tensor.hpp"
#include "nsbell/values.hpp"

namespace nsbell {

/// Random permutation game: N = K = n, winning answers b = sigma_{xy}(a).
struct PermGame {
  int n = 1;
  std::uint64_t seed = 0;
  std::vector<std::vector<int>> sigmas;  // index x*n + y; each a permutation of [0,n)

  const std::vector<int>& sigma(int x, int y) const {
    return sigmas[static_cast<std::size_t>(x) * static_cast<std::size_t>(n) +
                  static_cast<std::size_t>(y)];
  }
};

/// n^2 independent uniform permutations from one SplitMix64 stream, drawn
/// in (x,y) row-major order. Identical (n, seed) gives an identical game.
inline PermGame gen_perm_game(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_perm_game: n must be >= 1");
  PermGame g;
  g.n = n;
  g.seed = seed;
  g.sigmas.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  SplitMix64 rng(seed);
  for (int i = 0; i < n * n; ++i) g.sigmas.push_back(random_permutation(n, rng));
  return g;
}

/// 0/1 tensor M(x,j,y,b) = [b == sigma_{xy}(j)].
inline Tensor4 perm_game_tensor(const PermGame& g) {
  Tensor4 m(Dims{g.n, g.n, g.n, g.n});
  for (int x = 0; x < g.n; ++x)
    for (int y = 0; y < g.n; ++y) {
      const auto& s = g.sigma(x, y);
      for (int j = 0; j < g.n; ++j) m.at(x, j, y, s[static_cast<std::size_t>(j)]) = Rational(1);
    }
  return m;
}

struct PermGameNsValue {
  Rational value;   // exactly n^2
  Tensor4 witness;  // the attaining NS point (1/K) sum e_x e_j e_y e_sigma(j)
};

/// The NS value is n^2, attained by the uniform mixture of the winning
/// answers; checked here by membership and exact pairing rather than an LP.
inline PermGameNsValue perm_game_ns_value(const PermGame& g) {
  const Tensor4 m = perm_game_tensor(g);
  const Tensor4 witness = Rational(1, g.n) * m;
  if (!membership_ns(witness))
    throw std::logic_error("perm_game_ns_value: witness escaped the NS polytope");
  const Rational value(static_cast<long>(g.n) * g.n);
  if (pairing(m, witness) != value)
    throw std::logic_error("perm_game_ns_value: witness pairing is not n^2");
  return PermGameNsValue{value, witness};
}

struct PermGameClassical {
  std::int64_t value = 0;
  DeterministicStrategy strategy;
};

/// Exact classical value by exhaustive search over Alice maps a:[n]->[n]
/// with Bob's reply argmaxed per question (lowest index on ties). Parallel
/// over contiguous odometer blocks, merged deterministically.
inline PermGameClassical perm_game_classical_value(const PermGame& g, const Budgets& budgets = {}) {
  const int n = g.n;
  const auto total = pow_capped(static_cast<std::uint64_t>(n), n, budgets.max_strategies);
  if (!total)
    throw BudgetExceeded("perm_game_classical_value: n^n exceeds budget of " +
                         std::to_string(budgets.max_strategies));

  struct Best {
    std::int64_t value = -1;
    std::uint64_t idx = 0;
  };
  const int nthreads = resolve_threads(budgets.threads);
  std::vector<Best> block(static_cast<std::size_t>(
      std::min<std::uint64_t>(static_cast<std::uint64_t>(nthreads), *total)));
  parallel_blocks(*total, nthreads, [&](int bi, std::uint64_t lo, std::uint64_t hi) {
    std::vector<int> amap(static_cast<std::size_t>(n));
    std::vector<int> count(static_cast<std::size_t>(n));
    Best local;
    for (std::uint64_t i = lo; i < hi; ++i) {
      std::uint64_t rest = i;
      for (int x = n - 1; x >= 0; --x) {
        amap[static_cast<std::size_t>(x)] = static_cast<int>(rest % static_cast<std::uint64_t>(n));
        rest /= static_cast<std::uint64_t>(n);
      }
      std::int64_t v = 0;
      for (int y = 0; y < n; ++y) {
        std::fill(count.begin(), count.end(), 0);
        for (int x = 0; x < n; ++x)
          ++count[static_cast<std::size_t>(
              g.sigma(x, y)[static_cast<std::size_t>(amap[static_cast<std::size_t>(x)])])];
        v += *std::max_element(count.begin(), count.end());
      }
      if (v > local.value) {
        local.value = v;
        local.idx = i;
      }
    }
    block[static_cast<std::size_t>(bi)] = local;
  });
  Best best;
  for (const auto& bl : block)
    if (bl.value > best.value) best = bl;

  DeterministicStrategy s;
  s.a.assign(static_cast<std::size_t>(n), 0);
  std::uint64_t rest = best.idx;
  for (int x = n - 1; x >= 0; --x) {
    s.a[static_cast<std::size_t>(x)] = static_cast<int>(rest % static_cast<std::uint64_t>(n));
    rest /= static_cast<std::uint64_t>(n);
  }
  s.b.assign(static_cast<std::size_t>(n), 0);
  for (int y = 0; y < n; ++y) {
    std::vector<int> count(static_cast<std::size_t>(n), 0);
    for (int x = 0; x < n; ++x)
      ++count[static_cast<std::size_t>(g.sigma(x, y)[static_cast<std::size_t>(s.a[static_cast<std::size_t>(x)])])];
    s.b[static_cast<std::size_t>(y)] = static_cast<int>(
        std::max_element(count.begin(), count.end()) - count.begin());
  }
  s.signs_x.assign(static_cast<std::size_t>(n), 1);
  s.signs_y.assign(static_cast<std::size_t>(n), 1);
  return PermGameClassical{best.value, std::move(s)};
}

/// Certified classical lower bound: the value of the constant map a = 0
/// with per-question argmax replies. Always >= n.
inline std::int64_t perm_game_greedy_lower_bound(const PermGame& g) {
  const int n = g.n;
  std::int64_t v = 0;
  std::vector<int> count(static_cast<std::size_t>(n));
  for (int y = 0; y < n; ++y) {
    std::fill(count.begin(), count.end(), 0);
    for (int x = 0; x < n; ++x) ++count[static_cast<std::size_t>(g.sigma(x, y)[0])];
    v += *std::max_element(count.begin(), count.end());
  }
  return v;
}

/// XOR-d game: answers live in Z_d and win when (a + b) mod d = sigma_{xy}.
struct XorDGame {
  int n = 1, d = 1;
  std::uint64_t seed = 0;
  std::vector<std::vector<int>> sigma;  // n x n, entries in [0, d)
};

inline XorDGame gen_xor_d_game(int n, int d, std::uint64_t seed) {
  if (n < 1 || d < 1) throw std::invalid_argument("gen_xor_d_game: n and d must be >= 1");
  XorDGame g;
  g.n = n;
  g.d = d;
  g.seed = seed;
  SplitMix64 rng(seed);
  g.sigma.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      g.sigma[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] =
          static_cast<int>(rng.next_below(static_cast<std::uint64_t>(d)));
  return g;
}

/// 0/1 tensor M(x,a,y,b) = [(a + b) mod d == sigma_{xy}].
inline Tensor4 xor_d_tensor(const XorDGame& g) {
  Tensor4 m(Dims{g.n, g.d, g.n, g.d});
  for (int x = 0; x < g.n; ++x)
    for (int y = 0; y < g.n; ++y)
      for (int a = 0; a < g.d; ++a) {
        const int b = (g.sigma[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] - a % g.d +
                       g.d) %
                      g.d;
        m.at(x, a, y, b) = Rational(1);
      }
  return m;
}

/// The XOR-d analogue of the permutation-game NS value: the uniform winning
/// mixture pairs to n^2 and is non-signalling, so the value is exactly n^2.
inline PermGameNsValue xor_d_ns_value(const XorDGame& g) {
  const Tensor4 m = xor_d_tensor(g);
  const Tensor4 witness = Rational(1, g.d) * m;
  if (!membership_ns(witness))
    throw std::logic_error("xor_d_ns_value: witness escaped the NS polytope");
  const Rational value(static_cast<long>(g.n) * g.n);
  if (pairing(m, witness) != value)
    throw std::logic_error("xor_d_ns_value: witness pairing is not n^2");
  return PermGameNsValue{value, witness};
}

/// Seeded statistics of the random permutation game at one size: exact
/// per-trial classical values against the certified threshold (3 ln n - 1) n.
/// Ratios are exact rationals; only their decimal renderings are approximate.
struct ExperimentReport {
  int n = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> trial_seeds;
  std::vector<std::int64_t> omega_l;     // exact classical value per trial
  Rational ns_value;                     // n^2
  RationalInterval threshold;            // encloses (3 ln n - 1) n
  int below_threshold = 0;
  Rational fraction_below;
  Rational ratio_min, ratio_median, ratio_max;  // n^2 / omega_L statistics
};

/// Trials are independent games seeded with derive_seed(seed, trial); the
/// report is bit-identical for identical (n, trials, seed).
inline ExperimentReport chernoff_experiment(int n, int trials, std::uint64_t seed,
                                            const Budgets& budgets = {}) {
  if (n < 1) throw std::invalid_argument("chernoff_experiment: n must be >= 1");
  if (trials < 1) throw std::invalid_argument("chernoff_experiment: trials must be >= 1");
  ExperimentReport rep;
  rep.n = n;
  rep.trials = trials;
  rep.seed = seed;
  rep.ns_value = Rational(static_cast<long>(n) * n);
  rep.threshold = chernoff_threshold_bounds(n);
  rep.trial_seeds.resize(static_cast<std::size_t>(trials));
  rep.omega_l.assign(static_cast<std::size_t>(trials), 0);
  for (int t = 0; t < trials; ++t)
    rep.trial_seeds[static_cast<std::size_t>(t)] = derive_seed(seed, static_cast<std::uint64_t>(t));

  // trials in parallel; the classical search inside each trial is serial
  Budgets inner = budgets;
  inner.threads = 1;
  parallel_blocks(static_cast<std::uint64_t>(trials), resolve_threads(budgets.threads),
                  [&](int, std::uint64_t lo, std::uint64_t hi) {
                    for (std::uint64_t t = lo; t < hi; ++t) {
                      const PermGame g = gen_perm_game(n, rep.trial_seeds[t]);
                      rep.omega_l[t] = perm_game_classical_value(g, inner).value;
                    }
                  });

  std::vector<Rational> ratios;
  ratios.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    const Rational w(rep.omega_l[static_cast<std::size_t>(t)]);
    ratios.push_back(rep.ns_value / w);
    // exact side-decision against the enclosure; integers never land inside
    if (w < rep.threshold.lo)
      ++rep.below_threshold;
    else if (w < rep.threshold.hi)
      throw std::logic_error("chernoff_experiment: threshold enclosure too wide to decide");
  }
  rep.fraction_below = Rational(rep.below_threshold, trials);
  std::sort(ratios.begin(), ratios.end());
  rep.ratio_min = ratios.front();
  rep.ratio_max = ratios.back();
  const std::size_t mid = ratios.size() / 2;
  rep.ratio_median = ratios.size() % 2 == 1
                         ? ratios[mid]
                         : (ratios[mid - 1] + ratios[mid]) / Rational(2);
  return rep;
}

}  // namespace nsbell
