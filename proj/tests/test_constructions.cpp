#include <doctest.h>

#include <nsbell/constructions.hpp>
#include <nsbell/prng.hpp>
#include <nsbell/sampling.hpp>

#include "fixtures.hpp"

using namespace nsbell;

namespace {

bool dominates(const Tensor4& big, const Tensor4& small) {
  for (std::size_t i = 0; i < big.size(); ++i)
    if (big.at_linear(i) < small.at_linear(i)) return false;
  return true;
}

Rational slice_sum(const Tensor4& t, int x, int y) {
  Rational s;
  for (int a = 0; a < t.dims().k1; ++a)
    for (int b = 0; b < t.dims().k2; ++b) s += t.at(x, a, y, b);
  return s;
}

}  // namespace

TEST_CASE("snos_complete is the identity on NS points") {
  SplitMix64 rng(401);
  for (int i = 0; i < 20; ++i) {
    const Dims d{2, 3, 2, 2};
    const Tensor4 p = random_local_mixture(d, rng, 3);
    CHECK(snos_complete(p) == p);
  }
  CHECK(snos_complete(fixtures::pr_box()) == fixtures::pr_box());
}

TEST_CASE("snos_complete on half of the uniform point") {
  const Dims d{2, 2, 2, 2};
  const Tensor4 p = Rational(1, 2) * uniform_ns_point(d);
  const Tensor4 comp = snos_complete(p);
  CHECK(dominates(comp, p));
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) CHECK(slice_sum(comp, x, y) == Rational(1, 2));
  CHECK(membership_ns(Rational(2) * comp));
}

TEST_CASE("snos_complete dominates and lands in norm * NS") {
  SplitMix64 rng(402);
  for (int i = 0; i < 60; ++i) {
    const Dims d{static_cast<int>(rng.next_in(1, 3)), static_cast<int>(rng.next_in(1, 3)),
                 static_cast<int>(rng.next_in(1, 3)), static_cast<int>(rng.next_in(1, 3))};
    Tensor4 p = random_nonneg_tensor(d, rng);
    if (p.is_zero()) p.at(0, 0, 0, 0) = Rational(1, 2);
    const Rational nrm = norm_ns(p);
    const Tensor4 comp = snos_complete(p);
    CHECK(dominates(comp, p));
    for (int x = 0; x < d.n1; ++x)
      for (int y = 0; y < d.n2; ++y) CHECK(slice_sum(comp, x, y) == nrm);
    CHECK(membership_ns((Rational(1) / nrm) * comp));
  }
}

TEST_CASE("snos_complete marginal identities match the synthesized targets") {
  SplitMix64 rng(403);
  const Dims d{2, 3, 3, 2};
  Tensor4 p = random_nonneg_tensor(d, rng);
  if (p.is_zero()) p.at(0, 0, 0, 0) = Rational(1);
  const Rational nrm = norm_ns(p);
  const Tensor4 comp = snos_complete(p);
  // q1(x,a) = max_y sum_b p for a < k-1, patched at the last label
  for (int x = 0; x < d.n1; ++x) {
    Rational patched = nrm;
    for (int a = 0; a < d.k1 - 1; ++a) {
      Rational c;
      for (int y = 0; y < d.n2; ++y) {
        Rational s;
        for (int b = 0; b < d.k2; ++b) s += p.at(x, a, y, b);
        if (s > c) c = std::move(s);
      }
      patched -= c;
      for (int y = 0; y < d.n2; ++y) {
        Rational s;
        for (int b = 0; b < d.k2; ++b) s += comp.at(x, a, y, b);
        CHECK(s == c);
      }
    }
    for (int y = 0; y < d.n2; ++y) {
      Rational s;
      for (int b = 0; b < d.k2; ++b) s += comp.at(x, d.k1 - 1, y, b);
      CHECK(s == patched);
    }
  }
}

TEST_CASE("snos_complete rejects negative entries and passes zero through") {
  Tensor4 bad(Dims{2, 2, 2, 2});
  bad.at(0, 0, 0, 0) = Rational(-1);
  CHECK_THROWS_AS(snos_complete(bad), std::invalid_argument);
  const Tensor4 zero(Dims{2, 2, 2, 2});
  CHECK(snos_complete(zero) == zero);
}

TEST_CASE("ans_split on NS points and differences") {
  SplitMix64 rng(404);
  const Dims d{2, 2, 2, 2};
  const Tensor4 p = random_local_mixture(d, rng, 3);
  const auto sp = ans_split(p);
  CHECK(sp.lam == Rational(1));
  CHECK(sp.mu == Rational(0));
  CHECK(sp.pos == p);

  const Tensor4 q = random_local_mixture(d, rng, 2);
  const Tensor4 r = Rational(1, 2) * (p - q);
  const auto sr = ans_split(r);
  CHECK(sr.lam + sr.mu <= Rational(1));
  CHECK(sr.lam * sr.pos - sr.mu * sr.neg == r);
  CHECK(membership_ns(sr.pos));
  CHECK(membership_ns(sr.neg));
}

TEST_CASE("ans_split on random points with well-defined marginals") {
  SplitMix64 rng(405);
  for (int i = 0; i < 60; ++i) {
    const Dims d{static_cast<int>(rng.next_in(1, 3)), static_cast<int>(rng.next_in(1, 3)),
                 static_cast<int>(rng.next_in(1, 3)), static_cast<int>(rng.next_in(1, 3))};
    const Tensor4 r = random_ans_point(d, rng, 3);
    const auto marg = membership_ans(r);
    REQUIRE(marg.has_value());
    const auto s = ans_split(r);
    CHECK(s.lam * s.pos - s.mu * s.neg == r);
    CHECK(s.lam + s.mu == norm_ns(r));
    CHECK(s.lam - s.mu == marg->total);
    CHECK(membership_ns(s.pos));
    CHECK(membership_ns(s.neg));
  }
}

TEST_CASE("ans_split rejects tensors without marginals and passes zero") {
  Tensor4 off(Dims{2, 2, 2, 2});
  off.at(0, 0, 0, 0) = Rational(1);
  CHECK_THROWS_AS(ans_split(off), std::invalid_argument);
  const auto z = ans_split(Tensor4(Dims{2, 2, 2, 2}));
  CHECK(z.lam == Rational(0));
  CHECK(z.mu == Rational(0));
  CHECK(membership_ns(z.pos));
  CHECK(membership_ns(z.neg));
}

TEST_CASE("nsg norm and decomposition") {
  // stochastic matrices have norm 1 and decompose trivially
  RatMatrix st(2, 3);
  st.at(0, 0) = Rational(1, 2);
  st.at(0, 1) = Rational(1, 4);
  st.at(0, 2) = Rational(1, 4);
  st.at(1, 0) = Rational(1);
  const auto r = NsgElement::from_matrix(st);
  CHECK(r.row_sum == Rational(1));
  CHECK(nsg_norm(r) == Rational(1));
  const auto sp = nsg_decompose(r);
  CHECK(sp.big == Rational(1));
  CHECK(sp.small == Rational(0));
  CHECK(sp.p1.entries == st);

  RatMatrix neg = st;
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 3; ++a) neg.at(x, a) = -neg.at(x, a);
  const auto rn = NsgElement::from_matrix(neg);
  CHECK(nsg_norm(rn) == Rational(1));
  const auto spn = nsg_decompose(rn);
  CHECK(spn.big == Rational(0));
  CHECK(spn.small == Rational(1));

  // hand-checkable mixed-sign 2x2 with row sum 1
  RatMatrix m(2, 2);
  m.at(0, 0) = Rational(3, 2);
  m.at(0, 1) = Rational(-1, 2);
  m.at(1, 0) = Rational(1);
  m.at(1, 1) = Rational(0);
  const auto rm = NsgElement::from_matrix(m);
  CHECK(nsg_norm(rm) == Rational(2));
  const auto smx = nsg_decompose(rm);
  CHECK(smx.big == Rational(3, 2));
  CHECK(smx.small == Rational(1, 2));
  CHECK(smx.big + smx.small == nsg_norm(rm));
  CHECK(smx.big - smx.small == rm.row_sum);

  RatMatrix ragged(2, 2);
  ragged.at(0, 0) = Rational(1);
  ragged.at(1, 1) = Rational(2);
  CHECK_THROWS_AS(NsgElement::from_matrix(ragged), std::invalid_argument);
}

TEST_CASE("nsg decomposition properties on random elements") {
  SplitMix64 rng(406);
  for (int i = 0; i < 80; ++i) {
    const int n = static_cast<int>(rng.next_in(1, 4));
    const int k = static_cast<int>(rng.next_in(1, 4));
    RatMatrix m(n, k);
    // constant row sums by construction: free entries, last column patched
    const Rational target(rng.next_in(-4, 4), 2);
    for (int x = 0; x < n; ++x) {
      Rational sum;
      for (int a = 0; a < k - 1; ++a) {
        m.at(x, a) = Rational(rng.next_in(-6, 6), 3);
        sum += m.at(x, a);
      }
      m.at(x, k - 1) = target - sum;
    }
    const auto r = NsgElement::from_matrix(m);
    const auto sp = nsg_decompose(r);
    CHECK(sp.big + sp.small == nsg_norm(r));
    CHECK(sp.big - sp.small == r.row_sum);
    for (int x = 0; x < n; ++x) {
      Rational s1, s2;
      for (int a = 0; a < k; ++a) {
        CHECK(sp.p1.entries.at(x, a).sign() >= 0);
        CHECK(sp.p2.entries.at(x, a).sign() >= 0);
        s1 += sp.p1.entries.at(x, a);
        s2 += sp.p2.entries.at(x, a);
      }
      CHECK(s1 == Rational(1));
      CHECK(s2 == Rational(1));
    }
    // homogeneity in a positive scalar
    const Rational c(3, 2);
    RatMatrix scaled(n, k);
    for (int x = 0; x < n; ++x)
      for (int a = 0; a < k; ++a) scaled.at(x, a) = c * m.at(x, a);
    const auto sc = nsg_decompose(NsgElement::from_matrix(scaled));
    CHECK(sc.big == c * sp.big);
    CHECK(sc.small == c * sp.small);
  }
}

TEST_CASE("map_t round trip on random marginal-subspace points") {
  SplitMix64 rng(407);
  for (int i = 0; i < 500; ++i) {
    const int n = static_cast<int>(rng.next_in(1, 4));
    const int k = static_cast<int>(rng.next_in(1, 4));
    const Dims d{n, k, n, k};
    const Tensor4 r = random_ans_point(d, rng, 3);
    const BmImage w = map_t(r);
    CHECK(map_t_inv(w) == r);
    CHECK(bm_image_norm(w) <= norm_ns(r));  // ||T|| <= 1, sampled
  }
}

TEST_CASE("map_t on the uniform point and error paths") {
  const BmImage w = map_t(uniform_ns_point(Dims{3, 3, 3, 3}));
  CHECK(w.s == Rational(1));
  CHECK(map_t_inv(w) == uniform_ns_point(Dims{3, 3, 3, 3}));

  Tensor4 off(Dims{2, 2, 2, 2});
  off.at(0, 0, 0, 0) = Rational(1);
  CHECK_THROWS_AS(map_t(off), std::invalid_argument);
  CHECK_THROWS_AS(map_t(uniform_ns_point(Dims{2, 2, 3, 2})), std::invalid_argument);
}

TEST_CASE("map_t_inv is bounded by 9 on random images") {
  SplitMix64 rng(408);
  for (int i = 0; i < 300; ++i) {
    const int n = static_cast<int>(rng.next_in(1, 3));
    const int k = static_cast<int>(rng.next_in(1, 4));
    BmImage w;
    w.n = n;
    w.k = k;
    const auto kk = static_cast<std::size_t>(k - 1);
    const auto nn = static_cast<std::size_t>(n);
    w.core.assign(nn * kk * nn * kk, Rational(0));
    w.pa.assign(nn * kk, Rational(0));
    w.qb.assign(nn * kk, Rational(0));
    for (auto& c : w.core) c = random_rational(rng, -6, 6, 3);
    for (auto& c : w.pa) c = random_rational(rng, -6, 6, 3);
    for (auto& c : w.qb) c = random_rational(rng, -6, 6, 3);
    w.s = random_rational(rng, -6, 6, 3);
    const Tensor4 back = map_t_inv(w);
    CHECK(membership_ans(back).has_value());
    CHECK(norm_ns(back) <= Rational(9) * bm_image_norm(w));
    // alpha decomposition reproduces the inverse exactly
    const Tensor4 sum = alpha_map(1, w) + alpha_map(2, w) + alpha_map(3, w) + alpha_map(4, w);
    CHECK(sum == back);
    // and T(T^-1) fixes the image where defined
    const BmImage again = map_t(back);
    CHECK(again.core == w.core);
    CHECK(again.pa == w.pa);
    CHECK(again.qb == w.qb);
    CHECK(again.s == w.s);
  }
}

TEST_CASE("alpha maps match their closed forms") {
  const int n = 2, k = 3;
  BmImage w;
  w.n = n;
  w.k = k;
  w.core.assign(static_cast<std::size_t>(n * (k - 1) * n * (k - 1)), Rational(0));
  w.pa.assign(static_cast<std::size_t>(n * (k - 1)), Rational(0));
  w.qb.assign(static_cast<std::size_t>(n * (k - 1)), Rational(0));
  w.s = Rational(1);
  // alpha_4(1) is the indicator of the (a = K, b = K) block
  const Tensor4 a4 = alpha_map(4, w);
  for (int x = 0; x < n; ++x)
    for (int a = 0; a < k; ++a)
      for (int y = 0; y < n; ++y)
        for (int b = 0; b < k; ++b)
          CHECK(a4.at(x, a, y, b) == ((a == k - 1 && b == k - 1) ? Rational(1) : Rational(0)));
  CHECK_THROWS_AS(alpha_map(5, w), std::invalid_argument);

  // alpha_1 on a rank-one core P1 ox P2 is the product of the patched rows
  SplitMix64 rng(409);
  RatMatrix p1(n, k - 1), p2(n, k - 1);
  for (int x = 0; x < n; ++x)
    for (int a = 0; a < k - 1; ++a) {
      p1.at(x, a) = random_rational(rng, -3, 3, 2);
      p2.at(x, a) = random_rational(rng, -3, 3, 2);
    }
  BmImage rank1 = w;
  rank1.s = Rational(0);
  for (int x = 0; x < n; ++x)
    for (int a = 0; a < k - 1; ++a)
      for (int y = 0; y < n; ++y)
        for (int b = 0; b < k - 1; ++b)
          rank1.core[rank1.core_index(x, a, y, b)] = p1.at(x, a) * p2.at(y, b);
  const auto q_ext = [k](const RatMatrix& p, int x, int a) {
    if (a < k - 1) return p.at(x, a);
    Rational s;
    for (int c = 0; c < k - 1; ++c) s -= p.at(x, c);
    return s;
  };
  const Tensor4 a1 = alpha_map(1, rank1);
  for (int x = 0; x < n; ++x)
    for (int a = 0; a < k; ++a)
      for (int y = 0; y < n; ++y)
        for (int b = 0; b < k; ++b)
          CHECK(a1.at(x, a, y, b) == q_ext(p1, x, a) * q_ext(p2, y, b));
}
