#include <doctest.h>

#include <cmath>
#include <map>

#include <nsbell/experiments.hpp>
#include <nsbell/games.hpp>

#include "fixtures.hpp"

using namespace nsbell;

TEST_CASE("perm game generation is reproducible and valid") {
  const PermGame a = gen_perm_game(5, 7);
  const PermGame b = gen_perm_game(5, 7);
  CHECK(a.sigmas == b.sigmas);
  const PermGame c = gen_perm_game(5, 8);
  CHECK(a.sigmas != c.sigmas);
  for (const auto& s : a.sigmas) {
    std::vector<bool> seen(5, false);
    for (const int v : s) {
      CHECK(!seen[static_cast<std::size_t>(v)]);
      seen[static_cast<std::size_t>(v)] = true;
    }
  }
  const PermGame one = gen_perm_game(1, 3);
  CHECK(one.sigmas.size() == 1);
  CHECK(one.sigmas[0] == std::vector<int>{0});
}

TEST_CASE("Fisher-Yates permutations are close to uniform") {
  SplitMix64 rng(12345);
  std::map<std::vector<int>, int> counts;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) ++counts[random_permutation(3, rng)];
  CHECK(counts.size() == 6);
  // each class has p = 1/6; allow 5 sigma of binomial deviation
  const double p = 1.0 / 6.0;
  const double sigma = std::sqrt(p * (1 - p) / draws);
  for (const auto& [perm, cnt] : counts) {
    const double freq = static_cast<double>(cnt) / draws;
    CHECK(std::abs(freq - p) < 5 * sigma);
  }
}

TEST_CASE("perm game tensor matches its definition") {
  PermGame ident;
  ident.n = 2;
  ident.sigmas.assign(4, {0, 1});
  const Tensor4 m = perm_game_tensor(ident);
  int ones = 0;
  for (const auto& c : m.coeffs()) {
    CHECK((c == Rational(0) || c == Rational(1)));
    if (c == Rational(1)) ++ones;
  }
  CHECK(ones == 8);  // n^3 at n = 2

  for (const std::uint64_t seed : {1ull, 99ull}) {
    const PermGame g = gen_perm_game(3, seed);
    const Tensor4 t = perm_game_tensor(g);
    int count = 0;
    for (int x = 0; x < 3; ++x)
      for (int j = 0; j < 3; ++j)
        for (int y = 0; y < 3; ++y)
          for (int b = 0; b < 3; ++b) {
            const bool expect = g.sigma(x, y)[static_cast<std::size_t>(j)] == b;
            CHECK(t.at(x, j, y, b) == (expect ? Rational(1) : Rational(0)));
            if (expect) ++count;
          }
    CHECK(count == 27);
  }
}

TEST_CASE("perm game NS value is n^2 with a certified witness") {
  for (const std::uint64_t seed : {2ull, 3ull, 11ull}) {
    const PermGame g = gen_perm_game(3, seed);
    const auto r = perm_game_ns_value(g);
    CHECK(r.value == Rational(9));
    CHECK(membership_ns(r.witness));
    CHECK(norm_bns1(r.witness) == Rational(1));  // the strategy has unit norm
  }
  CHECK(perm_game_ns_value(gen_perm_game(1, 5)).value == Rational(1));
  // the LP route agrees at small sizes
  for (int n : {2, 3}) {
    const PermGame g = gen_perm_game(n, 17);
    CHECK(ns_value(perm_game_tensor(g)).value == Rational(n * n));
  }
}

TEST_CASE("perm game classical value: hand-checkable cases") {
  PermGame ident;
  ident.n = 2;
  ident.sigmas.assign(4, {0, 1});
  CHECK(perm_game_classical_value(ident).value == 4);

  // sigma = id on row x = 0, swap on row x = 1: winning both x per pair
  // needs a_0 = 1 - a_1, so (0,1) and (1,0) give 4, the others 2
  PermGame mixed;
  mixed.n = 2;
  mixed.sigmas = {{0, 1}, {0, 1}, {1, 0}, {1, 0}};
  const auto r = perm_game_classical_value(mixed);
  CHECK(r.value == 4);
  CHECK(r.strategy.a == std::vector<int>{0, 1});  // lowest-index winner reported
}

TEST_CASE("perm game classical value equals the generic enumeration") {
  for (int n = 2; n <= 4; ++n)
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const PermGame g = gen_perm_game(n, seed);
      const auto fast = perm_game_classical_value(g);
      const auto generic = classical_value(perm_game_tensor(g));
      CHECK(Rational(fast.value) == generic.value);
    }
}

TEST_CASE("greedy lower bound certifies omega_L >= n") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const PermGame g = gen_perm_game(4, seed);
    const std::int64_t greedy = perm_game_greedy_lower_bound(g);
    CHECK(greedy >= 4);
    CHECK(perm_game_classical_value(g).value >= greedy);
  }
}

TEST_CASE("perm classical refuses blown budgets") {
  Budgets tight;
  tight.max_strategies = 10;
  CHECK_THROWS_AS(perm_game_classical_value(gen_perm_game(4, 1), tight), BudgetExceeded);
}

TEST_CASE("chernoff experiment is reproducible and monotone in trials") {
  const auto a = chernoff_experiment(4, 8, 99);
  const auto b = chernoff_experiment(4, 8, 99);
  CHECK(a.omega_l == b.omega_l);
  CHECK(a.trial_seeds == b.trial_seeds);
  CHECK(a.fraction_below == b.fraction_below);

  const auto longer = chernoff_experiment(4, 12, 99);
  for (int t = 0; t < 8; ++t)
    CHECK(longer.omega_l[static_cast<std::size_t>(t)] == a.omega_l[static_cast<std::size_t>(t)]);
  std::int64_t running = 0, running_longer = 0;
  for (const auto v : a.omega_l) running = std::max(running, v);
  for (const auto v : longer.omega_l) running_longer = std::max(running_longer, v);
  CHECK(running_longer >= running);

  for (const auto v : a.omega_l) {
    CHECK(v >= 4);        // greedy floor
    CHECK(v <= 16);       // never above n^2
  }
  CHECK(a.ns_value == Rational(16));
  CHECK(a.below_threshold >= 0);
  CHECK(a.fraction_below == Rational(a.below_threshold, 8));
}

TEST_CASE("xor-d games") {
  // d = 1: the predicate is all-ones, so classical players always win
  const XorDGame triv = gen_xor_d_game(3, 1, 4);
  const Tensor4 tt = xor_d_tensor(triv);
  CHECK(classical_value(tt).value == Rational(9));
  CHECK(xor_d_ns_value(triv).value == Rational(9));

  // sigma = 0 at d = 2: answering (0, 0) everywhere wins every pair
  XorDGame zero;
  zero.n = 2;
  zero.d = 2;
  zero.sigma = {{0, 0}, {0, 0}};
  CHECK(classical_value(xor_d_tensor(zero)).value == Rational(4));

  // generation is reproducible, entries in range, and the witness matches
  // the LP value at n = d = 2
  const XorDGame a = gen_xor_d_game(2, 2, 21);
  CHECK(gen_xor_d_game(2, 2, 21).sigma == a.sigma);
  for (const auto& row : a.sigma)
    for (const int v : row) CHECK((v == 0 || v == 1));
  CHECK(xor_d_ns_value(a).value == Rational(4));
  CHECK(ns_value(xor_d_tensor(a)).value == Rational(4));
}

TEST_CASE("bound sweep emits only passing rows at desk scale") {
  const auto rep = bound_sweep({{2, 2}}, 3, 42);
  CHECK(rep.rows.size() == 9);
  for (const auto& row : rep.rows) {
    CHECK(row.pass);
    if (row.kind == "ans-hull") CHECK(row.value <= row.bound);
  }
}
