#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nsbell/games.hpp"
#include "nsbell/sampling.hpp"
#include "nsbell/values.hpp"

namespace nsbell {

/// One checked sample of a bound sweep.
struct BoundSweepRow {
  std::string kind;  // "nonneg-ratio" | "ans-hull" | "corr"
  int n = 0, k = 0;
  int sample = 0;
  std::uint64_t seed = 0;
  Rational value;
  Rational bound;
  bool pass = false;
};

struct BoundSweepReport {
  std::vector<BoundSweepRow> rows;
};

/// Sweeps the three sampled upper bounds per scenario (N, K):
///   nonneg-ratio  omega_NS/omega_L <= min(N, K) on random nonnegative tensors,
///   ans-hull      minimal co(Lu-L) scale of random ANS-ball points vs 9N,
///   corr          pi/eps ratio squared vs 2N on random sign matrices.
inline BoundSweepReport bound_sweep(const std::vector<std::pair<int, int>>& scenarios, int samples,
                                    std::uint64_t seed, const Budgets& budgets = {}) {
  if (samples < 1) throw std::invalid_argument("bound_sweep: samples must be >= 1");
  BoundSweepReport rep;
  std::uint64_t stream = 0;
  for (const auto& [n, k] : scenarios) {
    if (n < 1 || k < 1) throw std::invalid_argument("bound_sweep: scenario sizes must be >= 1");
    const Dims d{n, k, n, k};
    for (int s = 0; s < samples; ++s) {
      const std::uint64_t sub = derive_seed(seed, stream++);
      SplitMix64 rng(sub);
      Tensor4 g = random_nonneg_tensor(d, rng);
      if (g.is_zero()) g.at(0, 0, 0, 0) = Rational(1);
      const Rational ratio = lv_ratio_nonneg(g, budgets);
      const Rational bound(std::min(n, k));
      rep.rows.push_back({"nonneg-ratio", n, k, s, sub, ratio, bound, ratio <= bound});
    }
    for (int s = 0; s < samples; ++s) {
      const std::uint64_t sub = derive_seed(seed, stream++);
      SplitMix64 rng(sub);
      const Tensor4 r = random_ans_ball_point(d, rng, true, budgets.lp);
      const Rational bound(9L * n);
      const auto scale = min_scale_co_local(r, budgets);
      if (!scale) throw std::logic_error("bound_sweep: ANS sample escaped the local span");
      const bool pass = membership_co_local(r, bound, budgets);
      rep.rows.push_back({"ans-hull", n, k, s, sub, *scale, bound, pass});
    }
    for (int s = 0; s < samples; ++s) {
      const std::uint64_t sub = derive_seed(seed, stream++);
      SplitMix64 rng(sub);
      const CorrelationMatrix t(random_sign_matrix(n, rng));
      const Rational ratio = corr_lv_ratio(t, budgets);
      const Rational value = ratio * ratio;
      const Rational bound(2L * n);
      rep.rows.push_back({"corr", n, k, s, sub, value, bound, value <= bound});
    }
  }
  return rep;
}

}  // namespace nsbell
