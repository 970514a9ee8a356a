#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nsbell/errors.hpp"
#include "nsbell/lp.hpp"
#include "nsbell/parallel.hpp"
#include "nsbell/polytopes.hpp"
#include "nsbell/tensor.hpp"

namespace nsbell {

/// Enumeration and LP limits. Exceeding one raises BudgetExceeded; nothing
/// is ever approximated silently.
struct Budgets {
  std::uint64_t max_strategies = std::uint64_t{1} << 24;
  SolveOptions lp;
  int threads = 0;  // 0 = hardware concurrency
};

/// One extreme point of the classical strategy set: output maps for both
/// parties plus a sign per input (the sign freedom of the epsilon-norm
/// ball; fixed to +1 for nonnegative tensors).
struct DeterministicStrategy {
  std::vector<int> a, b;             // a[x] in [0,k1), b[y] in [0,k2)
  std::vector<int> signs_x, signs_y; // each +1 or -1
};

struct ClassicalValueResult {
  Rational value;
  DeterministicStrategy strategy;
};

namespace detail {

// Enumerates Alice-side choices (output map and, for signed tensors, a sign
// per input with the first input pinned to +1 by global sign symmetry); the
// Bob side is optimized per y in closed form. Parallel over contiguous
// odometer ranges with a deterministic lowest-index merge.
struct ClassicalEnumerator {
  const Tensor4& w;
  bool signed_mode;
  int n, k;
  std::uint64_t radix;  // choices per input: k, or 2k in signed mode

  std::uint64_t total() const {
    // first digit never carries a sign
    std::uint64_t r = static_cast<std::uint64_t>(k);
    for (int i = 1; i < n; ++i) r *= radix;
    return r;
  }

  void decode(std::uint64_t idx, std::vector<int>& amap, std::vector<int>& sign) const {
    for (int x = n - 1; x >= 1; --x) {
      const auto digit = idx % radix;
      idx /= radix;
      amap[static_cast<std::size_t>(x)] = static_cast<int>(digit % static_cast<std::uint64_t>(k));
      sign[static_cast<std::size_t>(x)] = digit < static_cast<std::uint64_t>(k) ? 1 : -1;
    }
    amap[0] = static_cast<int>(idx);
    sign[0] = 1;
  }

  Rational evaluate(const std::vector<int>& amap, const std::vector<int>& sign) const {
    const Dims d = w.dims();
    Rational sum;
    for (int y = 0; y < d.n2; ++y) {
      Rational best;
      bool first = true;
      for (int b = 0; b < d.k2; ++b) {
        Rational t;
        for (int x = 0; x < n; ++x) {
          const Rational& e = w.at(x, amap[static_cast<std::size_t>(x)], y, b);
          if (sign[static_cast<std::size_t>(x)] > 0)
            t += e;
          else
            t -= e;
        }
        if (signed_mode) t = abs(t);
        if (first || t > best) {
          best = std::move(t);
          first = false;
        }
      }
      sum += best;
    }
    return sum;
  }
};

}  // namespace detail

/// Exact classical (local) value: max over products of deterministic
/// conditionals with sign freedom of |<m, u ox v>|, with an attaining
/// strategy. For entrywise-nonnegative m all signs are +1 and only output
/// maps are searched.
inline ClassicalValueResult classical_value(const Tensor4& m, const Budgets& budgets = {}) {
  const Dims d = m.dims();
  const bool nonneg = m.nonnegative();
  const std::uint64_t cap = budgets.max_strategies;

  // enumerate whichever side has fewer candidates
  const auto side_count = [&](int n, int k) -> std::optional<std::uint64_t> {
    const std::uint64_t radix = nonneg ? static_cast<std::uint64_t>(k)
                                       : 2 * static_cast<std::uint64_t>(k);
    auto rest = pow_capped(radix, n - 1, cap);
    if (!rest) return std::nullopt;
    if (*rest > cap / static_cast<std::uint64_t>(k)) return std::nullopt;
    return *rest * static_cast<std::uint64_t>(k);
  };
  const auto alice_count = side_count(d.n1, d.k1);
  const auto bob_count = side_count(d.n2, d.k2);
  if (!alice_count && !bob_count)
    throw BudgetExceeded("classical_value: strategy enumeration exceeds budget of " +
                         std::to_string(cap) + " strategies");
  const bool use_bob = !alice_count || (bob_count && *bob_count < *alice_count);

  const Tensor4 work = use_bob ? flip(m) : m;
  detail::ClassicalEnumerator en{work, !nonneg, work.dims().n1, work.dims().k1,
                                 nonneg ? static_cast<std::uint64_t>(work.dims().k1)
                                        : 2 * static_cast<std::uint64_t>(work.dims().k1)};
  const std::uint64_t total = en.total();

  struct Best {
    bool set = false;
    Rational value;
    std::uint64_t idx = 0;
  };
  const int nthreads = resolve_threads(budgets.threads);
  std::vector<Best> block(static_cast<std::size_t>(std::min<std::uint64_t>(
      static_cast<std::uint64_t>(nthreads), total == 0 ? 1 : total)));
  parallel_blocks(total, nthreads, [&](int bi, std::uint64_t lo, std::uint64_t hi) {
    std::vector<int> amap(static_cast<std::size_t>(en.n)), sign(static_cast<std::size_t>(en.n));
    Best local;
    for (std::uint64_t i = lo; i < hi; ++i) {
      en.decode(i, amap, sign);
      Rational v = en.evaluate(amap, sign);
      if (!local.set || v > local.value) {
        local.value = std::move(v);
        local.idx = i;
        local.set = true;
      }
    }
    block[static_cast<std::size_t>(bi)] = std::move(local);
  });
  Best best;
  for (const auto& bl : block) {
    if (!bl.set) continue;
    if (!best.set || bl.value > best.value) best = bl;  // block order keeps lowest index on ties
  }
  if (!best.set) throw std::logic_error("classical_value: empty enumeration");

  // reconstruct the winning strategy, choosing Bob's side per y
  std::vector<int> amap(static_cast<std::size_t>(en.n)), sign(static_cast<std::size_t>(en.n));
  en.decode(best.idx, amap, sign);
  const Dims wd = work.dims();
  std::vector<int> bmap(static_cast<std::size_t>(wd.n2), 0);
  std::vector<int> bsign(static_cast<std::size_t>(wd.n2), 1);
  for (int y = 0; y < wd.n2; ++y) {
    Rational bestv;
    int bestb = 0, bests = 1;
    bool first = true;
    for (int b = 0; b < wd.k2; ++b) {
      Rational t;
      for (int x = 0; x < wd.n1; ++x) {
        const Rational& e = work.at(x, amap[static_cast<std::size_t>(x)], y, b);
        if (sign[static_cast<std::size_t>(x)] > 0)
          t += e;
        else
          t -= e;
      }
      const int s = (!nonneg && t.sign() < 0) ? -1 : 1;
      Rational v = s < 0 ? -t : t;
      if (first || v > bestv) {
        bestv = std::move(v);
        bestb = b;
        bests = s;
        first = false;
      }
    }
    bmap[static_cast<std::size_t>(y)] = bestb;
    bsign[static_cast<std::size_t>(y)] = bests;
  }

  DeterministicStrategy s;
  if (use_bob) {
    s.a = bmap;
    s.signs_x = bsign;
    s.b = amap;
    s.signs_y = sign;
  } else {
    s.a = amap;
    s.signs_x = sign;
    s.b = bmap;
    s.signs_y = bsign;
  }
  return ClassicalValueResult{best.value, std::move(s)};
}

struct NsValueResult {
  Rational value;
  Tensor4 attaining;
};

/// Exact non-signalling value sup_{P in NS} |<m,P>| with an attaining NS
/// point, via the NS-polytope LP. Nonnegative m needs only the max side
/// (the polytope is entrywise nonnegative, so <m,P> >= 0).
inline NsValueResult ns_value(const Tensor4& m, const SolveOptions& opt = {}) {
  const auto run = [&](Sense sense) {
    const LPOutcome out = solve(make_ns_value_lp(m, sense), opt);
    if (out.status != LPStatus::optimal)
      throw std::logic_error("ns_value: NS polytope LP must be feasible and bounded");
    return out;
  };
  LPOutcome best = run(Sense::maximize);
  Rational value = best.value;
  if (!m.nonnegative()) {
    LPOutcome low = run(Sense::minimize);
    if (abs(low.value) > abs(value)) {
      value = low.value;
      best = std::move(low);
    }
  }
  Tensor4 attaining(m.dims(), std::move(best.point));
  if (!membership_ns(attaining))
    throw std::logic_error("ns_value: attaining point escaped the NS polytope");
  return NsValueResult{abs(value), std::move(attaining)};
}

/// Optimal split certificate for the dual non-signalling norm.
struct DnsCertificate {
  Rational value;
  Tensor4 m1, m2;  // m1 + m2 equals the input; value = ||m1||_1* + ||m2||_2*
};

/// ||m||_DNS = inf { ||M1||_1* + ||M2||_2* : m = M1 + M2 }, exactly, with
/// the attaining split.
inline DnsCertificate dns_norm(const Tensor4& m, const SolveOptions& opt = {}) {
  DnsSplitLayout lay;
  const LPOutcome out = solve(make_dns_split_lp(m, &lay), opt);
  if (out.status != LPStatus::optimal)
    throw std::logic_error("dns_norm: split LP must be feasible and bounded");
  std::vector<Rational> c1(out.point.begin() + lay.m1_0,
                           out.point.begin() + lay.m1_0 + static_cast<long>(m.size()));
  Tensor4 m1(m.dims(), std::move(c1));
  Tensor4 m2 = m - m1;
  if (dual_norm1(m1) + dual_norm2(m2) != out.value)
    throw std::logic_error("dns_norm: certificate does not reproduce the LP value");
  return DnsCertificate{out.value, std::move(m1), std::move(m2)};
}

/// ||m||_DNS by its other route: sup over the NS unit ball of <m,P>.
/// (The ball is centrally symmetric, so the max side suffices.)
inline Rational dns_norm_dual(const Tensor4& m, const SolveOptions& opt = {}) {
  const LPOutcome out = solve(make_ns_ball_lp(m, Sense::maximize, false), opt);
  if (out.status != LPStatus::optimal)
    throw std::logic_error("dns_norm_dual: NS ball LP must be feasible and bounded");
  return out.value;
}

/// SNOS: nonnegative and dominated by an NS point; equivalently nonnegative
/// with NS norm at most one.
inline bool membership_snos(const Tensor4& p) {
  return p.nonnegative() && norm_ns(p) <= Rational(1);
}

/// omega_NS / omega_L for a nonnegative tensor; checks the min-dimension
/// bound on the way out.
inline Rational lv_ratio_nonneg(const Tensor4& g, const Budgets& budgets = {}) {
  if (!g.nonnegative()) throw std::invalid_argument("lv_ratio_nonneg: tensor has negative entries");
  if (g.is_zero()) throw std::invalid_argument("lv_ratio_nonneg: zero tensor has no ratio");
  const Rational cls = classical_value(g, budgets).value;
  const Rational ns = ns_value(g, budgets.lp).value;
  if (cls.is_zero())
    throw std::logic_error("lv_ratio_nonneg: zero classical value on a nonzero nonnegative tensor");
  const Rational ratio = ns / cls;
  const Dims d = g.dims();
  const long bound = std::min(std::min(d.n1, d.n2), std::min(d.k1, d.k2));
  if (ratio > Rational(bound))
    throw std::logic_error("lv_ratio_nonneg: ratio exceeds the min-dimension bound");
  return ratio;
}

/// Square matrix of exact rationals acting on correlations.
struct CorrelationMatrix {
  explicit CorrelationMatrix(RatMatrix m) : entries(std::move(m)) {
    if (entries.rows() != entries.cols())
      throw std::invalid_argument("CorrelationMatrix: must be square");
    if (entries.rows() < 1) throw std::invalid_argument("CorrelationMatrix: must be nonempty");
  }
  int n() const { return entries.rows(); }
  RatMatrix entries;
};

/// Projective norm on l1 ox l1: the entrywise l1 norm.
inline Rational corr_pi_norm(const CorrelationMatrix& t) {
  Rational s;
  for (int i = 0; i < t.n(); ++i)
    for (int j = 0; j < t.n(); ++j) s += abs(t.entries.at(i, j));
  return s;
}

/// Injective norm on l1 ox l1: max over sign vectors eps, delta of
/// |sum eps_i delta_j T_ij|. The delta side is optimal per column, and
/// eps_0 = +1 by symmetry, leaving 2^(n-1) cases.
inline Rational corr_eps_norm(const CorrelationMatrix& t, const Budgets& budgets = {}) {
  const int n = t.n();
  if (n > 63 || (std::uint64_t{1} << (n - 1)) > budgets.max_strategies)
    throw BudgetExceeded("corr_eps_norm: 2^(n-1) sign patterns exceed budget");
  Rational best;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
    Rational v;
    for (int j = 0; j < n; ++j) {
      Rational col = t.entries.at(0, j);
      for (int i = 1; i < n; ++i) {
        if ((mask >> (i - 1)) & 1)
          col -= t.entries.at(i, j);
        else
          col += t.entries.at(i, j);
      }
      v += abs(col);
    }
    if (v > best) best = std::move(v);
  }
  return best;
}

/// pi/eps ratio; exact check of ratio^2 <= 2n on the way out.
inline Rational corr_lv_ratio(const CorrelationMatrix& t, const Budgets& budgets = {}) {
  const Rational pi = corr_pi_norm(t);
  const Rational eps = corr_eps_norm(t, budgets);
  if (eps.is_zero()) throw std::invalid_argument("corr_lv_ratio: zero matrix has no ratio");
  const Rational ratio = pi / eps;
  if (ratio * ratio > Rational(2L * t.n()))
    throw std::logic_error("corr_lv_ratio: ratio exceeds sqrt(2n)");
  return ratio;
}

namespace detail {

inline std::vector<std::vector<Rational>> signed_local_vertices(const Dims& d,
                                                                std::uint64_t max_points) {
  const auto pts = local_deterministic_points(d, max_points / 2);
  std::vector<std::vector<Rational>> v;
  v.reserve(2 * pts.size());
  for (const auto& p : pts) v.push_back(p.coeffs());
  for (const auto& p : pts) {
    std::vector<Rational> neg = p.coeffs();
    for (auto& c : neg) c = -c;
    v.push_back(std::move(neg));
  }
  return v;
}

}  // namespace detail

/// True iff r/scale lies in co(Lu-L), the convex hull of the signed local
/// deterministic points, by an exact feasibility LP.
inline bool membership_co_local(const Tensor4& r, const Rational& scale,
                                const Budgets& budgets = {}) {
  if (scale.sign() <= 0) throw std::invalid_argument("membership_co_local: scale must be positive");
  const auto vertices = detail::signed_local_vertices(r.dims(), budgets.max_strategies);
  std::vector<Rational> point = r.coeffs();
  for (auto& c : point) c /= scale;
  return membership_in_hull(point, vertices, budgets.lp);
}

/// Smallest s >= 0 with r/s in co(L u -L): min sum(mu) over mu >= 0 with
/// sum mu_i V_i = r. Empty when r is outside the span.
inline std::optional<Rational> min_scale_co_local(const Tensor4& r, const Budgets& budgets = {}) {
  const auto vertices = detail::signed_local_vertices(r.dims(), budgets.max_strategies);
  const int n = static_cast<int>(vertices.size());
  LinearProgram lp = LinearProgram::make(n, Sense::minimize);
  for (int i = 0; i < n; ++i) {
    lp.lower[static_cast<std::size_t>(i)] = Rational(0);
    lp.objective[static_cast<std::size_t>(i)] = Rational(1);
  }
  const auto& coeffs = r.coeffs();
  for (std::size_t c = 0; c < coeffs.size(); ++c) {
    std::vector<Rational> row(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) row[static_cast<std::size_t>(i)] = vertices[static_cast<std::size_t>(i)][c];
    lp.add_row(std::move(row), Relation::equal, coeffs[c]);
  }
  const LPOutcome out = solve(lp, budgets.lp);
  if (out.status == LPStatus::infeasible) return std::nullopt;
  if (out.status != LPStatus::optimal)
    throw std::logic_error("min_scale_co_local: LP must be bounded");
  return out.value;
}

}  // namespace nsbell
