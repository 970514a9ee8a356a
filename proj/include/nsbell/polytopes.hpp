#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "nsbell/errors.hpp"
#include "nsbell/lp.hpp"
#include "nsbell/tensor.hpp"

namespace nsbell {

/// base^exp, or nullopt once the value would pass `cap`.
inline std::optional<std::uint64_t> pow_capped(std::uint64_t base, int exp, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > cap / base) return std::nullopt;
    r *= base;
    if (r > cap) return std::nullopt;
  }
  return r;
}

/// LP for sup/inf of <m,P> over the non-signalling polytope: P >= 0,
/// every (x,y) slice sums to 1, and both marginal families are
/// input-independent. Variables are the tensor entries in canonical order.
inline LinearProgram make_ns_value_lp(const Tensor4& m, Sense sense) {
  const Dims d = m.dims();
  const int t = static_cast<int>(d.size());
  LinearProgram lp = LinearProgram::make(t, sense);
  Tensor4 ix(d);  // index helper only
  for (int i = 0; i < t; ++i) {
    lp.objective[static_cast<std::size_t>(i)] = m.at_linear(static_cast<std::size_t>(i));
    lp.lower[static_cast<std::size_t>(i)] = Rational(0);
  }
  const auto zero_row = [&] { return std::vector<Rational>(static_cast<std::size_t>(t), Rational(0)); };
  for (int x = 0; x < d.n1; ++x)
    for (int y = 0; y < d.n2; ++y) {
      auto row = zero_row();
      for (int a = 0; a < d.k1; ++a)
        for (int b = 0; b < d.k2; ++b) row[ix.index(x, a, y, b)] = Rational(1);
      lp.add_row(std::move(row), Relation::equal, Rational(1));
    }
  // Bob's marginal cannot see x; Alice's cannot see y
  for (int x = 1; x < d.n1; ++x)
    for (int y = 0; y < d.n2; ++y)
      for (int b = 0; b < d.k2; ++b) {
        auto row = zero_row();
        for (int a = 0; a < d.k1; ++a) {
          row[ix.index(x, a, y, b)] = Rational(1);
          row[ix.index(0, a, y, b)] -= Rational(1);
        }
        lp.add_row(std::move(row), Relation::equal, Rational(0));
      }
  for (int y = 1; y < d.n2; ++y)
    for (int x = 0; x < d.n1; ++x)
      for (int a = 0; a < d.k1; ++a) {
        auto row = zero_row();
        for (int b = 0; b < d.k2; ++b) {
          row[ix.index(x, a, y, b)] = Rational(1);
          row[ix.index(x, a, 0, b)] -= Rational(1);
        }
        lp.add_row(std::move(row), Relation::equal, Rational(0));
      }
  return lp;
}

/// Variable layout of the NS-ball LP below.
struct NsBallLayout {
  Dims dims;
  int p0 = 0;   // tensor entries (free)
  int q0 = 0;   // q >= |P| entrywise
  int h0 = 0;   // per-(x,a) majorants of sum_b q, all y
  int g0 = 0;   // per-(y,b) majorants of sum_a q, all x
  int nvars = 0;
};

/// LP feasible set { P : ||P||_NS <= 1 }, optionally intersected with the
/// subspace of well-defined marginals. Objective is <objective,P>.
///
/// The norm constraint is the polyhedral lift of the iterated max/sum
/// formula: q >= |P| entrywise; h_{xa} >= sum_b q(x,a,y,b) for every y with
/// sum_a h_{xa} <= 1; and the flipped family via g_{yb}.
inline LinearProgram make_ns_ball_lp(const Tensor4& objective, Sense sense, bool restrict_to_ans,
                                     NsBallLayout* layout_out = nullptr) {
  const Dims d = objective.dims();
  const int t = static_cast<int>(d.size());
  NsBallLayout lay;
  lay.dims = d;
  lay.p0 = 0;
  lay.q0 = t;
  lay.h0 = 2 * t;
  lay.g0 = 2 * t + d.n1 * d.k1;
  lay.nvars = 2 * t + d.n1 * d.k1 + d.n2 * d.k2;

  LinearProgram lp = LinearProgram::make(lay.nvars, sense);
  Tensor4 ix(d);
  for (int i = 0; i < t; ++i)
    lp.objective[static_cast<std::size_t>(i)] = objective.at_linear(static_cast<std::size_t>(i));
  for (int i = t; i < lay.nvars; ++i) lp.lower[static_cast<std::size_t>(i)] = Rational(0);

  const auto zero_row = [&] {
    return std::vector<Rational>(static_cast<std::size_t>(lay.nvars), Rational(0));
  };
  for (int i = 0; i < t; ++i) {
    auto row = zero_row();  // P_i - q_i <= 0
    row[static_cast<std::size_t>(lay.p0 + i)] = Rational(1);
    row[static_cast<std::size_t>(lay.q0 + i)] = Rational(-1);
    lp.add_row(std::move(row), Relation::less_equal, Rational(0));
    row = zero_row();  // -P_i - q_i <= 0
    row[static_cast<std::size_t>(lay.p0 + i)] = Rational(-1);
    row[static_cast<std::size_t>(lay.q0 + i)] = Rational(-1);
    lp.add_row(std::move(row), Relation::less_equal, Rational(0));
  }
  for (int x = 0; x < d.n1; ++x)
    for (int a = 0; a < d.k1; ++a) {
      for (int y = 0; y < d.n2; ++y) {
        auto row = zero_row();
        for (int b = 0; b < d.k2; ++b)
          row[lay.q0 + ix.index(x, a, y, b)] = Rational(1);
        row[static_cast<std::size_t>(lay.h0 + x * d.k1 + a)] = Rational(-1);
        lp.add_row(std::move(row), Relation::less_equal, Rational(0));
      }
    }
  for (int x = 0; x < d.n1; ++x) {
    auto row = zero_row();
    for (int a = 0; a < d.k1; ++a)
      row[static_cast<std::size_t>(lay.h0 + x * d.k1 + a)] = Rational(1);
    lp.add_row(std::move(row), Relation::less_equal, Rational(1));
  }
  for (int y = 0; y < d.n2; ++y)
    for (int b = 0; b < d.k2; ++b) {
      for (int x = 0; x < d.n1; ++x) {
        auto row = zero_row();
        for (int a = 0; a < d.k1; ++a)
          row[lay.q0 + ix.index(x, a, y, b)] = Rational(1);
        row[static_cast<std::size_t>(lay.g0 + y * d.k2 + b)] = Rational(-1);
        lp.add_row(std::move(row), Relation::less_equal, Rational(0));
      }
    }
  for (int y = 0; y < d.n2; ++y) {
    auto row = zero_row();
    for (int b = 0; b < d.k2; ++b)
      row[static_cast<std::size_t>(lay.g0 + y * d.k2 + b)] = Rational(1);
    lp.add_row(std::move(row), Relation::less_equal, Rational(1));
  }
  if (restrict_to_ans) {
    for (int x = 1; x < d.n1; ++x)
      for (int y = 0; y < d.n2; ++y)
        for (int b = 0; b < d.k2; ++b) {
          auto row = zero_row();
          for (int a = 0; a < d.k1; ++a) {
            row[lay.p0 + ix.index(x, a, y, b)] = Rational(1);
            row[lay.p0 + ix.index(0, a, y, b)] -= Rational(1);
          }
          lp.add_row(std::move(row), Relation::equal, Rational(0));
        }
    for (int y = 1; y < d.n2; ++y)
      for (int x = 0; x < d.n1; ++x)
        for (int a = 0; a < d.k1; ++a) {
          auto row = zero_row();
          for (int b = 0; b < d.k2; ++b) {
            row[lay.p0 + ix.index(x, a, y, b)] = Rational(1);
            row[lay.p0 + ix.index(x, a, 0, b)] -= Rational(1);
          }
          lp.add_row(std::move(row), Relation::equal, Rational(0));
        }
  }
  if (layout_out) *layout_out = lay;
  return lp;
}

/// Variable layout of the DNS split LP below.
struct DnsSplitLayout {
  Dims dims;
  int m1_0 = 0;  // entries of M1 (free); M2 = M - M1 is substituted
  int w1_0 = 0;  // w1_{xay} >= max_b |M1|
  int v1_0 = 0;  // v1_x >= max_a sum_y w1
  int w2_0 = 0;  // w2_{ybx} >= max_a |M - M1|
  int v2_0 = 0;  // v2_y >= max_b sum_x w2
  int nvars = 0;
};

/// LP computing ||M||_DNS = inf { ||M1||_1* + ||M2||_2* : M = M1 + M2 }.
/// Minimizes sum_x v1_x + sum_y v2_y over the epigraph lift of both
/// iterated sum/max norms.
inline LinearProgram make_dns_split_lp(const Tensor4& m, DnsSplitLayout* layout_out = nullptr) {
  const Dims d = m.dims();
  const int t = static_cast<int>(d.size());
  DnsSplitLayout lay;
  lay.dims = d;
  lay.m1_0 = 0;
  lay.w1_0 = t;
  lay.v1_0 = t + d.n1 * d.k1 * d.n2;
  lay.w2_0 = lay.v1_0 + d.n1;
  lay.v2_0 = lay.w2_0 + d.n2 * d.k2 * d.n1;
  lay.nvars = lay.v2_0 + d.n2;

  LinearProgram lp = LinearProgram::make(lay.nvars, Sense::minimize);
  Tensor4 ix(d);
  for (int i = t; i < lay.nvars; ++i) lp.lower[static_cast<std::size_t>(i)] = Rational(0);
  for (int x = 0; x < d.n1; ++x) lp.objective[static_cast<std::size_t>(lay.v1_0 + x)] = Rational(1);
  for (int y = 0; y < d.n2; ++y) lp.objective[static_cast<std::size_t>(lay.v2_0 + y)] = Rational(1);

  const auto zero_row = [&] {
    return std::vector<Rational>(static_cast<std::size_t>(lay.nvars), Rational(0));
  };
  const auto w1_at = [&](int x, int a, int y) {
    return static_cast<std::size_t>(lay.w1_0 + (x * d.k1 + a) * d.n2 + y);
  };
  const auto w2_at = [&](int y, int b, int x) {
    return static_cast<std::size_t>(lay.w2_0 + (y * d.k2 + b) * d.n1 + x);
  };

  for (int x = 0; x < d.n1; ++x)
    for (int a = 0; a < d.k1; ++a)
      for (int y = 0; y < d.n2; ++y)
        for (int b = 0; b < d.k2; ++b) {
          const std::size_t i = ix.index(x, a, y, b);
          auto row = zero_row();  // M1_i - w1 <= 0
          row[static_cast<std::size_t>(lay.m1_0) + i] = Rational(1);
          row[w1_at(x, a, y)] = Rational(-1);
          lp.add_row(std::move(row), Relation::less_equal, Rational(0));
          row = zero_row();  // -M1_i - w1 <= 0
          row[static_cast<std::size_t>(lay.m1_0) + i] = Rational(-1);
          row[w1_at(x, a, y)] = Rational(-1);
          lp.add_row(std::move(row), Relation::less_equal, Rational(0));
          // (M - M1)_i <= w2  =>  -M1_i - w2 <= -M_i
          row = zero_row();
          row[static_cast<std::size_t>(lay.m1_0) + i] = Rational(-1);
          row[w2_at(y, b, x)] = Rational(-1);
          lp.add_row(std::move(row), Relation::less_equal, -m.at_linear(i));
          // -(M - M1)_i <= w2  =>  M1_i - w2 <= M_i
          row = zero_row();
          row[static_cast<std::size_t>(lay.m1_0) + i] = Rational(1);
          row[w2_at(y, b, x)] = Rational(-1);
          lp.add_row(std::move(row), Relation::less_equal, m.at_linear(i));
        }
  for (int x = 0; x < d.n1; ++x)
    for (int a = 0; a < d.k1; ++a) {
      auto row = zero_row();  // sum_y w1_{xay} - v1_x <= 0
      for (int y = 0; y < d.n2; ++y) row[w1_at(x, a, y)] = Rational(1);
      row[static_cast<std::size_t>(lay.v1_0 + x)] = Rational(-1);
      lp.add_row(std::move(row), Relation::less_equal, Rational(0));
    }
  for (int y = 0; y < d.n2; ++y)
    for (int b = 0; b < d.k2; ++b) {
      auto row = zero_row();  // sum_x w2_{ybx} - v2_y <= 0
      for (int x = 0; x < d.n1; ++x) row[w2_at(y, b, x)] = Rational(1);
      row[static_cast<std::size_t>(lay.v2_0 + y)] = Rational(-1);
      lp.add_row(std::move(row), Relation::less_equal, Rational(0));
    }
  if (layout_out) *layout_out = lay;
  return lp;
}

/// Product of two deterministic conditionals: P(a,b|x,y) = [a==amap(x)][b==bmap(y)].
inline Tensor4 deterministic_point(const Dims& d, const std::vector<int>& amap,
                                   const std::vector<int>& bmap) {
  if (static_cast<int>(amap.size()) != d.n1 || static_cast<int>(bmap.size()) != d.n2)
    throw std::invalid_argument("deterministic_point: map length mismatch");
  Tensor4 p(d);
  for (int x = 0; x < d.n1; ++x)
    for (int y = 0; y < d.n2; ++y)
      p.at(x, amap[static_cast<std::size_t>(x)], y, bmap[static_cast<std::size_t>(y)]) = Rational(1);
  return p;
}

/// All k1^n1 * k2^n2 local deterministic points, in odometer order.
/// Throws BudgetExceeded when the count passes `max_points`.
inline std::vector<Tensor4> local_deterministic_points(const Dims& d, std::uint64_t max_points) {
  const auto ca = pow_capped(static_cast<std::uint64_t>(d.k1), d.n1, max_points);
  const auto cb = pow_capped(static_cast<std::uint64_t>(d.k2), d.n2, max_points);
  if (!ca || !cb || *ca > max_points / *cb)
    throw BudgetExceeded("local vertex enumeration exceeds budget");
  std::vector<Tensor4> out;
  out.reserve(static_cast<std::size_t>(*ca * *cb));
  std::vector<int> amap(static_cast<std::size_t>(d.n1), 0);
  for (std::uint64_t i = 0; i < *ca; ++i) {
    std::vector<int> bmap(static_cast<std::size_t>(d.n2), 0);
    for (std::uint64_t j = 0; j < *cb; ++j) {
      out.push_back(deterministic_point(d, amap, bmap));
      for (int y = d.n2 - 1; y >= 0; --y) {
        if (++bmap[static_cast<std::size_t>(y)] < d.k2) break;
        bmap[static_cast<std::size_t>(y)] = 0;
      }
    }
    for (int x = d.n1 - 1; x >= 0; --x) {
      if (++amap[static_cast<std::size_t>(x)] < d.k1) break;
      amap[static_cast<std::size_t>(x)] = 0;
    }
  }
  return out;
}

}  // namespace nsbell
