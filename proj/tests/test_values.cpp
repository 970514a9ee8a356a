#include <doctest.h>

#include <nsbell/prng.hpp>
#include <nsbell/sampling.hpp>
#include <nsbell/values.hpp>

#include "fixtures.hpp"

using namespace nsbell;

namespace {

// independent oracle: all 16 deterministic strategies of the 2x2 scenario
Rational chsh_classical_oracle(const Tensor4& m) {
  Rational best;
  for (int a0 = 0; a0 < 2; ++a0)
    for (int a1 = 0; a1 < 2; ++a1)
      for (int b0 = 0; b0 < 2; ++b0)
        for (int b1 = 0; b1 < 2; ++b1) {
          const int a[2] = {a0, a1}, b[2] = {b0, b1};
          Rational v;
          for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) v += m.at(x, a[x], y, b[y]);
          if (v > best) best = v;
        }
  return best;
}

Rational strategy_pairing(const Tensor4& m, const DeterministicStrategy& s) {
  Rational v;
  for (int x = 0; x < m.dims().n1; ++x)
    for (int y = 0; y < m.dims().n2; ++y) {
      const Rational& e = m.at(x, s.a[static_cast<std::size_t>(x)], y, s.b[static_cast<std::size_t>(y)]);
      const int sg = s.signs_x[static_cast<std::size_t>(x)] * s.signs_y[static_cast<std::size_t>(y)];
      if (sg > 0)
        v += e;
      else
        v -= e;
    }
  return v;
}

}  // namespace

TEST_CASE("classical value of CHSH is 3/4") {
  const Tensor4 chsh = fixtures::chsh_game();
  CHECK(chsh_classical_oracle(chsh) == Rational(3, 4));
  const auto r = classical_value(chsh);
  CHECK(r.value == Rational(3, 4));
  CHECK(strategy_pairing(chsh, r.strategy) == Rational(3, 4));
}

TEST_CASE("classical value of the sharpness witness is 1") {
  for (int n : {2, 3, 4, 5}) {
    const auto r = classical_value(fixtures::sharpness_witness(n));
    CHECK(r.value == Rational(1));
  }
}

TEST_CASE("classical value with all-identity permutations is n^2") {
  const int n = 3;
  Tensor4 m(Dims{n, n, n, n});
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int j = 0; j < n; ++j) m.at(x, j, y, j) = Rational(1);
  const auto r = classical_value(m);
  CHECK(r.value == Rational(n * n));
}

TEST_CASE("classical value uses signs on signed tensors") {
  // diag(+1,-1) pattern in a 2-input 1-output scenario: only signs matter
  Tensor4 m(Dims{2, 1, 2, 1});
  m.at(0, 0, 0, 0) = Rational(1);
  m.at(0, 0, 1, 0) = Rational(1);
  m.at(1, 0, 0, 0) = Rational(1);
  m.at(1, 0, 1, 0) = Rational(-1);
  const auto r = classical_value(m);
  CHECK(r.value == Rational(2));  // the epsilon norm of the CHSH sign matrix
  CHECK(strategy_pairing(m, r.strategy) == Rational(2));
}

TEST_CASE("classical value refuses blown budgets") {
  Budgets tight;
  tight.max_strategies = 8;
  const Tensor4 m(Dims{4, 4, 4, 4});
  CHECK_THROWS_AS(classical_value(m, tight), BudgetExceeded);
}

TEST_CASE("ns value of CHSH is 1, attained by a PR-type box") {
  const auto r = ns_value(fixtures::chsh_game());
  CHECK(r.value == Rational(1));
  CHECK(membership_ns(r.attaining));
  CHECK(pairing(fixtures::chsh_game(), r.attaining) == Rational(1));
  CHECK(pairing(fixtures::chsh_game(), fixtures::pr_box()) == Rational(1));
}

TEST_CASE("ns value of the zero tensor is 0") {
  CHECK(ns_value(Tensor4(Dims{2, 2, 2, 2})).value == Rational(0));
}

TEST_CASE("dns certificate reconstructs and matches the dual route") {
  SplitMix64 rng(301);
  for (int i = 0; i < 40; ++i) {
    const int n = static_cast<int>(rng.next_in(1, 2));
    const int k = static_cast<int>(rng.next_in(1, 3));
    const Dims d{n, k, n, k};
    const Tensor4 m = random_signed_tensor(d, rng);
    const auto cert = dns_norm(m);
    CHECK(cert.m1 + cert.m2 == m);
    CHECK(dual_norm1(cert.m1) + dual_norm2(cert.m2) == cert.value);
    CHECK(dns_norm_dual(m) == cert.value);
    CHECK(cert.value <= dual_norm1(m));
    CHECK(cert.value <= dual_norm2(m));
  }
}

TEST_CASE("dns equals ns value on nonnegative tensors") {
  SplitMix64 rng(302);
  for (int i = 0; i < 15; ++i) {
    const int n = static_cast<int>(rng.next_in(1, 2));
    const int k = static_cast<int>(rng.next_in(1, 3));
    const Tensor4 g = random_nonneg_tensor(Dims{n, k, n, k}, rng);
    CHECK(ns_value(g).value == dns_norm(g).value);
  }
}

TEST_CASE("dns of the witness stays at 1 and of zero at 0") {
  const auto zero = dns_norm(Tensor4(Dims{2, 2, 2, 2}));
  CHECK(zero.value == Rational(0));
  CHECK(zero.m1.is_zero());
  CHECK(zero.m2.is_zero());
  for (int n : {2, 3}) {
    const auto cert = dns_norm(fixtures::sharpness_witness(n));
    CHECK(cert.value <= Rational(1));
    CHECK(cert.value == Rational(1));  // >= classical value 1 by duality
  }
}

TEST_CASE("dns scales with nonnegative factors") {
  SplitMix64 rng(303);
  const Tensor4 m = random_signed_tensor(Dims{2, 2, 2, 2}, rng);
  const Rational c(7, 3);
  CHECK(dns_norm_dual(c * m) == c * dns_norm_dual(m));
}

TEST_CASE("pairing bound |<M,P>| <= dns(M) norm_ns(P)") {
  SplitMix64 rng(304);
  for (int i = 0; i < 25; ++i) {
    const Dims d{2, 2, 2, 2};
    const Tensor4 m = random_signed_tensor(d, rng);
    const Tensor4 p = random_signed_tensor(d, rng);
    CHECK(abs(pairing(m, p)) <= dns_norm(m).value * norm_ns(p));
  }
}

TEST_CASE("snos membership") {
  const Dims d{2, 2, 2, 2};
  CHECK(membership_snos(uniform_ns_point(d)));
  CHECK_FALSE(membership_snos(Rational(2) * uniform_ns_point(d)));
  CHECK_FALSE(membership_snos(-uniform_ns_point(d)));
  SplitMix64 rng(305);
  for (int i = 0; i < 30; ++i) {
    Tensor4 p = random_nonneg_tensor(d, rng);
    if (p.is_zero()) p.at(0, 0, 0, 0) = Rational(1);
    p = (Rational(1) / norm_ns(p)) * p;  // rescale onto the unit sphere
    CHECK(norm_ns(p) == Rational(1));
    CHECK(membership_snos(p));
  }
}

TEST_CASE("lv ratio on nonnegative tensors") {
  CHECK(lv_ratio_nonneg(fixtures::chsh_game()) == Rational(4, 3));
  // identity permutation game: classical strategies already win everything
  Tensor4 ident(Dims{2, 2, 2, 2});
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int j = 0; j < 2; ++j) ident.at(x, j, y, j) = Rational(1);
  CHECK(lv_ratio_nonneg(ident) == Rational(1));
  SplitMix64 rng(306);
  for (int i = 0; i < 8; ++i) {
    Tensor4 g = random_nonneg_tensor(Dims{3, 3, 3, 3}, rng);
    if (g.is_zero()) g.at(0, 0, 0, 0) = Rational(1);
    CHECK(lv_ratio_nonneg(g) <= Rational(3));
  }
  CHECK_THROWS_AS(lv_ratio_nonneg(-fixtures::chsh_game()), std::invalid_argument);
  CHECK_THROWS_AS(lv_ratio_nonneg(Tensor4(Dims{2, 2, 2, 2})), std::invalid_argument);
}

TEST_CASE("bounds from the dual norms against the classical value") {
  SplitMix64 rng(307);
  for (int i = 0; i < 12; ++i) {
    const Dims d{2, 2, 2, 2};
    const Tensor4 m = random_signed_tensor(d, rng);
    const Rational cls = classical_value(m).value;
    CHECK(dual_norm1(m) <= Rational(d.n1) * cls);  // holds unsigned
    Tensor4 g = random_nonneg_tensor(Dims{2, 3, 2, 3}, rng);
    if (g.is_zero()) g.at(0, 0, 0, 0) = Rational(1);
    const Rational gcls = classical_value(g).value;
    CHECK(dual_norm1(g) <= Rational(2) * gcls);  // min{N,K} for nonneg
  }
}

TEST_CASE("correlation norms") {
  const CorrelationMatrix chsh(fixtures::chsh_sign_pattern());
  CHECK(corr_pi_norm(chsh) == Rational(4));
  CHECK(corr_eps_norm(chsh) == Rational(2));
  CHECK(corr_lv_ratio(chsh) == Rational(2));  // saturates sqrt(2n) at n = 2

  RatMatrix ident(2, 2);
  ident.at(0, 0) = Rational(1);
  ident.at(1, 1) = Rational(1);
  CHECK(corr_pi_norm(CorrelationMatrix(ident)) == Rational(2));
  CHECK(corr_eps_norm(CorrelationMatrix(ident)) == Rational(2));

  const int n = 4;
  RatMatrix ones(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) ones.at(i, j) = Rational(1);
  CHECK(corr_pi_norm(CorrelationMatrix(ones)) == Rational(n * n));
  CHECK(corr_eps_norm(CorrelationMatrix(ones)) == Rational(n * n));
  CHECK(corr_lv_ratio(CorrelationMatrix(ones)) == Rational(1));

  SplitMix64 rng(308);
  for (int i = 0; i < 20; ++i) {
    const CorrelationMatrix t(random_sign_matrix(8, rng));
    const Rational r = corr_lv_ratio(t);
    CHECK(r * r <= Rational(16));  // sqrt(2n) = 4 at n = 8
  }
  Budgets tiny;
  tiny.max_strategies = 4;
  CHECK_THROWS_AS(corr_eps_norm(CorrelationMatrix(random_sign_matrix(8, rng)), tiny),
                  BudgetExceeded);
  CHECK_THROWS_AS(corr_lv_ratio(CorrelationMatrix(RatMatrix(2, 2))), std::invalid_argument);
}

TEST_CASE("hull membership of signed local points") {
  SplitMix64 rng(309);
  const Dims d{2, 2, 2, 2};
  const Tensor4 det = random_local_deterministic(d, rng);
  CHECK(membership_co_local(det, Rational(1)));
  CHECK_FALSE(membership_co_local(fixtures::pr_box(), Rational(1)));
  CHECK(membership_co_local(fixtures::pr_box(), Rational(18)));  // 9N at N = 2
  const auto s = min_scale_co_local(fixtures::pr_box());
  REQUIRE(s.has_value());
  CHECK(*s > Rational(1));
  CHECK(*s <= Rational(18));
  CHECK(membership_co_local(fixtures::pr_box(), *s));
  CHECK_THROWS_AS(membership_co_local(det, Rational(0)), std::invalid_argument);
  // a tensor outside the marginal subspace has no finite scale
  Tensor4 off(d);
  off.at(0, 0, 0, 0) = Rational(1);
  CHECK_FALSE(min_scale_co_local(off).has_value());
}
