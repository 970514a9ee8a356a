#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "nsbell/tensor.hpp"

namespace nsbell {

/// Matrix with constant row sums, normed by the maximum row l1 norm.
struct NsgElement {
  RatMatrix entries;  // n rows (inputs) x k cols (outputs)
  Rational row_sum;   // the common value of every row sum

  static NsgElement from_matrix(RatMatrix m) {
    if (m.rows() < 1 || m.cols() < 1)
      throw std::invalid_argument("NsgElement: matrix must be nonempty");
    Rational first;
    for (int x = 0; x < m.rows(); ++x) {
      Rational s;
      for (int a = 0; a < m.cols(); ++a) s += m.at(x, a);
      if (x == 0)
        first = s;
      else if (s != first)
        throw std::invalid_argument("NsgElement: rows are not constant-sum");
    }
    return NsgElement{std::move(m), std::move(first)};
  }
  int n() const { return entries.rows(); }
  int k() const { return entries.cols(); }
};

/// max_x sum_a |R(x|a)|
inline Rational nsg_norm(const NsgElement& r) {
  Rational best;
  for (int x = 0; x < r.n(); ++x) {
    Rational s;
    for (int a = 0; a < r.k(); ++a) s += abs(r.entries.at(x, a));
    if (s > best) best = std::move(s);
  }
  return best;
}

/// R = big*p1 - small*p2 with stochastic p1, p2 and big + small minimal
/// (= the NSG norm). big - small equals the common row sum.
struct NsgSplit {
  Rational big, small;
  NsgElement p1, p2;
};

/// Constructive optimal split: big/small are the maxima over rows of the
/// positive/negative part sums, each leg a row-stochastic matrix patched at
/// the last output label.
inline NsgSplit nsg_decompose(const NsgElement& r) {
  const int n = r.n(), k = r.k();
  Rational big, small;
  for (int x = 0; x < n; ++x) {
    Rational pos, neg;
    for (int a = 0; a < k; ++a) {
      const Rational& e = r.entries.at(x, a);
      if (e.sign() >= 0)
        pos += e;
      else
        neg -= e;
    }
    if (pos > big) big = std::move(pos);
    if (neg > small) small = std::move(neg);
  }
  RatMatrix p1(n, k), p2(n, k);
  for (int x = 0; x < n; ++x) {
    Rational s1, s2;
    for (int a = 0; a < k - 1; ++a) {
      const Rational& e = r.entries.at(x, a);
      if (e.sign() >= 0 && big.sign() > 0) p1.at(x, a) = e / big;
      if (e.sign() < 0 && small.sign() > 0) p2.at(x, a) = -e / small;
      s1 += p1.at(x, a);
      s2 += p2.at(x, a);
    }
    p1.at(x, k - 1) = Rational(1) - s1;
    p2.at(x, k - 1) = Rational(1) - s2;
  }
  NsgSplit out{std::move(big), std::move(small), NsgElement{std::move(p1), Rational(1)},
               NsgElement{std::move(p2), Rational(1)}};
  for (int x = 0; x < n; ++x)
    for (int a = 0; a < k; ++a) {
      const Rational v = out.big * out.p1.entries.at(x, a) - out.small * out.p2.entries.at(x, a);
      if (v != r.entries.at(x, a))
        throw std::logic_error("nsg_decompose: reconstruction failed");
    }
  return out;
}

namespace detail {

/// Completion step shared by the SNOS and ANS constructions: given a
/// nonnegative tensor p and marginal targets q1, q2 with
///   sum_a q1(x,a) = total = sum_b q2(y,b),
///   sum_b p(x,a,y,b) <= q1(x,a) and sum_a p(x,a,y,b) <= q2(y,b),
/// returns ptilde >= p whose slice sums all equal `total` and whose
/// marginals are exactly q1 and q2. Per slice (x,y):
///   u = total - sum p,  s(a) = q1(x,a) - sum_b p,  t(b) = q2(y,b) - sum_a p,
///   ptilde = p + s*t/u  (p unchanged where u = 0).
inline Tensor4 complete_with_marginals(const Tensor4& p, const RatMatrix& q1, const RatMatrix& q2,
                                       const Rational& total) {
  const Dims d = p.dims();
  if (q1.rows() != d.n1 || q1.cols() != d.k1 || q2.rows() != d.n2 || q2.cols() != d.k2)
    throw std::invalid_argument("complete_with_marginals: marginal shape mismatch");
  for (int x = 0; x < d.n1; ++x) {
    Rational s;
    for (int a = 0; a < d.k1; ++a) s += q1.at(x, a);
    if (s != total) throw std::invalid_argument("complete_with_marginals: q1 rows must sum to total");
  }
  for (int y = 0; y < d.n2; ++y) {
    Rational s;
    for (int b = 0; b < d.k2; ++b) s += q2.at(y, b);
    if (s != total) throw std::invalid_argument("complete_with_marginals: q2 rows must sum to total");
  }

  Tensor4 out = p;
  std::vector<Rational> srow(static_cast<std::size_t>(d.k1));
  std::vector<Rational> trow(static_cast<std::size_t>(d.k2));
  for (int x = 0; x < d.n1; ++x)
    for (int y = 0; y < d.n2; ++y) {
      Rational slice;
      for (int a = 0; a < d.k1; ++a) {
        Rational s;
        for (int b = 0; b < d.k2; ++b) s += p.at(x, a, y, b);
        if (s > q1.at(x, a))
          throw std::invalid_argument("complete_with_marginals: q1 does not dominate");
        srow[static_cast<std::size_t>(a)] = q1.at(x, a) - s;
        slice += s;
      }
      for (int b = 0; b < d.k2; ++b) {
        Rational s;
        for (int a = 0; a < d.k1; ++a) s += p.at(x, a, y, b);
        if (s > q2.at(y, b))
          throw std::invalid_argument("complete_with_marginals: q2 does not dominate");
        trow[static_cast<std::size_t>(b)] = q2.at(y, b) - s;
      }
      const Rational u = total - slice;
      if (u.is_zero()) continue;
      for (int a = 0; a < d.k1; ++a) {
        if (srow[static_cast<std::size_t>(a)].is_zero()) continue;
        for (int b = 0; b < d.k2; ++b)
          out.at(x, a, y, b) += srow[static_cast<std::size_t>(a)] * trow[static_cast<std::size_t>(b)] / u;
      }
    }
  return out;
}

}  // namespace detail

/// Completion of a nonnegative tensor: returns ptilde >= p entrywise with
/// ptilde / ||p||_NS non-signalling and every slice summing to ||p||_NS.
/// The marginal targets are synthesized from the iterated row maxima,
/// patched at the last output label so each sums to the norm.
inline Tensor4 snos_complete(const Tensor4& p) {
  if (!p.nonnegative()) throw std::invalid_argument("snos_complete: tensor has negative entries");
  const Dims d = p.dims();
  const Rational nrm = norm_ns(p);
  if (nrm.is_zero()) return p;

  RatMatrix q1(d.n1, d.k1), q2(d.n2, d.k2);
  for (int x = 0; x < d.n1; ++x) {
    Rational tail;
    for (int a = 0; a < d.k1; ++a) {
      Rational c;
      for (int y = 0; y < d.n2; ++y) {
        Rational s;
        for (int b = 0; b < d.k2; ++b) s += p.at(x, a, y, b);
        if (s > c) c = std::move(s);
      }
      if (a < d.k1 - 1) {
        q1.at(x, a) = c;
        tail += c;
      }
    }
    q1.at(x, d.k1 - 1) = nrm - tail;
  }
  for (int y = 0; y < d.n2; ++y) {
    Rational tail;
    for (int b = 0; b < d.k2; ++b) {
      Rational c;
      for (int x = 0; x < d.n1; ++x) {
        Rational s;
        for (int a = 0; a < d.k1; ++a) s += p.at(x, a, y, b);
        if (s > c) c = std::move(s);
      }
      if (b < d.k2 - 1) {
        q2.at(y, b) = c;
        tail += c;
      }
    }
    q2.at(y, d.k2 - 1) = nrm - tail;
  }
  return detail::complete_with_marginals(p, q1, q2, nrm);
}

/// r = lam*pos - mu*neg with pos, neg non-signalling, lam + mu = ||r||_NS
/// and lam - mu = z (the constant slice total).
struct AnsSplit {
  Rational lam;
  Tensor4 pos;
  Rational mu;
  Tensor4 neg;
};

/// Constructive decomposition of an element with well-defined marginals
/// into its positive and negative NS legs. Both parts are completed against
/// marginal targets read off at the argmax rows of |r|; the two completions
/// use identical correction terms, which makes the reconstruction exact.
/// A vanishing leg is returned as the uniform NS point with coefficient 0.
inline AnsSplit ans_split(const Tensor4& r) {
  const auto marg = membership_ans(r);
  if (!marg) throw std::invalid_argument("ans_split: input has no well-defined marginals");
  const Dims d = r.dims();

  const Tensor4 rp = positive_part(r);
  const Tensor4 rm = -negative_part(r);  // |R^-|, entrywise >= 0
  const Rational lam = norm_ns(rp);
  const Rational mu = norm_ns(rm);
  const Tensor4 uniform = uniform_ns_point(d);
  if (lam.is_zero() && mu.is_zero())
    return AnsSplit{Rational(0), uniform, Rational(0), uniform};

  // c^{+-}(x,a) and d^{+-}(y,b) evaluated at the argmax input of |r|
  const auto build_q = [&](const Tensor4& part, const Rational& total) {
    RatMatrix q1(d.n1, d.k1), q2(d.n2, d.k2);
    for (int x = 0; x < d.n1; ++x) {
      Rational tail;
      for (int a = 0; a < d.k1; ++a) {
        Rational best;
        int ybest = 0;
        bool first = true;
        for (int y = 0; y < d.n2; ++y) {
          Rational s;
          for (int b = 0; b < d.k2; ++b) s += abs(r.at(x, a, y, b));
          if (first || s > best) {
            best = std::move(s);
            ybest = y;
            first = false;
          }
        }
        if (a < d.k1 - 1) {
          Rational c;
          for (int b = 0; b < d.k2; ++b) c += part.at(x, a, ybest, b);
          tail += c;
          q1.at(x, a) = std::move(c);
        }
      }
      q1.at(x, d.k1 - 1) = total - tail;
    }
    for (int y = 0; y < d.n2; ++y) {
      Rational tail;
      for (int b = 0; b < d.k2; ++b) {
        Rational best;
        int xbest = 0;
        bool first = true;
        for (int x = 0; x < d.n1; ++x) {
          Rational s;
          for (int a = 0; a < d.k1; ++a) s += abs(r.at(x, a, y, b));
          if (first || s > best) {
            best = std::move(s);
            xbest = x;
            first = false;
          }
        }
        if (b < d.k2 - 1) {
          Rational c;
          for (int a = 0; a < d.k1; ++a) c += part.at(xbest, a, y, b);
          tail += c;
          q2.at(y, b) = std::move(c);
        }
      }
      q2.at(y, d.k2 - 1) = total - tail;
    }
    return std::make_pair(std::move(q1), std::move(q2));
  };

  const auto [q1p, q2p] = build_q(rp, lam);
  const auto [q1m, q2m] = build_q(rm, mu);
  const Tensor4 rtp = detail::complete_with_marginals(rp, q1p, q2p, lam);
  const Tensor4 rtm = detail::complete_with_marginals(rm, q1m, q2m, mu);

  if (!(rtp - rtm == r)) throw std::logic_error("ans_split: reconstruction failed");
  if (lam + mu != norm_ns(r)) throw std::logic_error("ans_split: norm additivity failed");
  if (lam - mu != marg->total) throw std::logic_error("ans_split: total mass identity failed");

  AnsSplit out{lam, uniform, mu, uniform};
  if (!lam.is_zero()) out.pos = (Rational(1) / lam) * rtp;
  if (!mu.is_zero()) out.neg = (Rational(1) / mu) * rtm;
  if (!membership_ns(out.pos) || !membership_ns(out.neg))
    throw std::logic_error("ans_split: a leg escaped the NS polytope");
  return out;
}

/// Image of the isomorphism onto
/// BNS_{N,K-1} (+)_inf linf(l1^{K-1}) (+)_inf linf(l1^{K-1}) (+)_inf R.
/// The direct sum is free: no constraints tie the four slots together.
struct BmImage {
  int n = 1, k = 1;
  std::vector<Rational> core;  // (n, k-1, n, k-1) canonical order; empty when k = 1
  std::vector<Rational> pa;    // n x (k-1) row-major
  std::vector<Rational> qb;    // n x (k-1) row-major
  Rational s;

  std::size_t core_index(int x, int a, int y, int b) const {
    const auto kk = static_cast<std::size_t>(k - 1);
    return ((static_cast<std::size_t>(x) * kk + static_cast<std::size_t>(a)) *
                static_cast<std::size_t>(n) +
            static_cast<std::size_t>(y)) *
               kk +
           static_cast<std::size_t>(b);
  }
  std::size_t pair_index(int x, int a) const {
    return static_cast<std::size_t>(x) * static_cast<std::size_t>(k - 1) +
           static_cast<std::size_t>(a);
  }
  void check_sizes() const {
    const auto kk = static_cast<std::size_t>(k - 1);
    const auto nn = static_cast<std::size_t>(n);
    if (n < 1 || k < 1 || core.size() != nn * kk * nn * kk || pa.size() != nn * kk ||
        qb.size() != nn * kk)
      throw std::invalid_argument("BmImage: inconsistent sizes");
  }
};

/// Forward map: drop the last output label in each slot and record the
/// marginals and the total. Requires a square scenario and well-defined
/// marginals.
inline BmImage map_t(const Tensor4& r) {
  const Dims d = r.dims();
  if (!d.square()) throw std::invalid_argument("map_t: scenario must be square");
  const auto marg = membership_ans(r);
  if (!marg) throw std::invalid_argument("map_t: input has no well-defined marginals");
  const int n = d.n1, k = d.k1;
  BmImage w;
  w.n = n;
  w.k = k;
  w.core.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(k - 1) *
                    static_cast<std::size_t>(n) * static_cast<std::size_t>(k - 1),
                Rational(0));
  w.pa.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(k - 1), Rational(0));
  w.qb = w.pa;
  for (int x = 0; x < n; ++x)
    for (int a = 0; a < k - 1; ++a)
      for (int y = 0; y < n; ++y)
        for (int b = 0; b < k - 1; ++b) w.core[w.core_index(x, a, y, b)] = r.at(x, a, y, b);
  for (int x = 0; x < n; ++x)
    for (int a = 0; a < k - 1; ++a) w.pa[w.pair_index(x, a)] = marg->alice.at(x, a);
  for (int y = 0; y < n; ++y)
    for (int b = 0; b < k - 1; ++b) w.qb[w.pair_index(y, b)] = marg->bob.at(y, b);
  w.s = marg->total;
  return w;
}

/// Inverse map: the four-case reconstruction. Output always has
/// well-defined marginals (pa, qb, s by construction).
inline Tensor4 map_t_inv(const BmImage& w) {
  w.check_sizes();
  const int n = w.n, k = w.k;
  Tensor4 r(Dims{n, k, n, k});
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      Rational core_xy;
      for (int a = 0; a < k - 1; ++a)
        for (int b = 0; b < k - 1; ++b) core_xy += w.core[w.core_index(x, a, y, b)];
      for (int a = 0; a < k - 1; ++a) {
        for (int b = 0; b < k - 1; ++b) r.at(x, a, y, b) = w.core[w.core_index(x, a, y, b)];
        Rational row;
        for (int b = 0; b < k - 1; ++b) row += w.core[w.core_index(x, a, y, b)];
        r.at(x, a, y, k - 1) = w.pa[w.pair_index(x, a)] - row;
      }
      for (int b = 0; b < k - 1; ++b) {
        Rational col;
        for (int a = 0; a < k - 1; ++a) col += w.core[w.core_index(x, a, y, b)];
        r.at(x, k - 1, y, b) = w.qb[w.pair_index(y, b)] - col;
      }
      Rational pa_sum, qb_sum;
      for (int a = 0; a < k - 1; ++a) pa_sum += w.pa[w.pair_index(x, a)];
      for (int b = 0; b < k - 1; ++b) qb_sum += w.qb[w.pair_index(y, b)];
      r.at(x, k - 1, y, k - 1) = w.s + core_xy - qb_sum - pa_sum;
    }
  return r;
}

/// The four summands of the inverse map; their sum equals map_t_inv.
/// part selects the slot consumed: 1 core, 2 pa, 3 qb, 4 s.
inline Tensor4 alpha_map(int part, const BmImage& w) {
  w.check_sizes();
  const int n = w.n, k = w.k;
  Tensor4 r(Dims{n, k, n, k});
  switch (part) {
    case 1:
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          Rational total;
          for (int a = 0; a < k - 1; ++a) {
            Rational row;
            for (int b = 0; b < k - 1; ++b) {
              const Rational& c = w.core[w.core_index(x, a, y, b)];
              r.at(x, a, y, b) = c;
              row += c;
            }
            r.at(x, a, y, k - 1) = -row;
            total += row;
          }
          for (int b = 0; b < k - 1; ++b) {
            Rational col;
            for (int a = 0; a < k - 1; ++a) col += w.core[w.core_index(x, a, y, b)];
            r.at(x, k - 1, y, b) = -col;
          }
          r.at(x, k - 1, y, k - 1) = total;
        }
      break;
    case 2:
      for (int x = 0; x < n; ++x) {
        Rational row;
        for (int a = 0; a < k - 1; ++a) row += w.pa[w.pair_index(x, a)];
        for (int y = 0; y < n; ++y) {
          for (int a = 0; a < k - 1; ++a) r.at(x, a, y, k - 1) = w.pa[w.pair_index(x, a)];
          r.at(x, k - 1, y, k - 1) = -row;
        }
      }
      break;
    case 3:
      for (int y = 0; y < n; ++y) {
        Rational row;
        for (int b = 0; b < k - 1; ++b) row += w.qb[w.pair_index(y, b)];
        for (int x = 0; x < n; ++x) {
          for (int b = 0; b < k - 1; ++b) r.at(x, k - 1, y, b) = w.qb[w.pair_index(y, b)];
          r.at(x, k - 1, y, k - 1) = -row;
        }
      }
      break;
    case 4:
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) r.at(x, k - 1, y, k - 1) = w.s;
      break;
    default:
      throw std::invalid_argument("alpha_map: part must be 1..4");
  }
  return r;
}

/// (+)_inf norm of the image: max of the core NS norm, the two row-max l1
/// norms, and |s|.
inline Rational bm_image_norm(const BmImage& w) {
  w.check_sizes();
  Rational best = abs(w.s);
  if (w.k >= 2) {
    const Tensor4 core(Dims{w.n, w.k - 1, w.n, w.k - 1}, w.core);
    best = max(best, norm_ns(core));
  }
  for (int x = 0; x < w.n; ++x) {
    Rational sa, sb;
    for (int a = 0; a < w.k - 1; ++a) {
      sa += abs(w.pa[w.pair_index(x, a)]);
      sb += abs(w.qb[w.pair_index(x, a)]);
    }
    best = max(best, max(sa, sb));
  }
  return best;
}

}  // namespace nsbell
