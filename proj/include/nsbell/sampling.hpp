#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "nsbell/polytopes.hpp"
#include "nsbell/prng.hpp"
#include "nsbell/tensor.hpp"
#include "nsbell/values.hpp"

namespace nsbell {

/// Uniform rational num/den with num in [lo, hi].
inline Rational random_rational(SplitMix64& rng, long lo, long hi, long den) {
  return Rational(rng.next_in(lo, hi), den);
}

/// Entries num/4 with num in [0, 8].
inline Tensor4 random_nonneg_tensor(const Dims& d, SplitMix64& rng) {
  Tensor4 t(d);
  for (std::size_t i = 0; i < t.size(); ++i) t.at_linear(i) = random_rational(rng, 0, 8, 4);
  return t;
}

/// Entries num/4 with num in [-8, 8].
inline Tensor4 random_signed_tensor(const Dims& d, SplitMix64& rng) {
  Tensor4 t(d);
  for (std::size_t i = 0; i < t.size(); ++i) t.at_linear(i) = random_rational(rng, -8, 8, 4);
  return t;
}

/// Random member of C: each (x,y) slice is an independent random
/// distribution (generically signalling).
inline Tensor4 random_c_point(const Dims& d, SplitMix64& rng) {
  Tensor4 t(d);
  for (int x = 0; x < d.n1; ++x)
    for (int y = 0; y < d.n2; ++y) {
      std::vector<long> w(static_cast<std::size_t>(d.k1) * static_cast<std::size_t>(d.k2));
      long total = 0;
      for (auto& v : w) {
        v = rng.next_in(0, 9);
        total += v;
      }
      if (total == 0) {
        w[0] = 1;
        total = 1;
      }
      std::size_t i = 0;
      for (int a = 0; a < d.k1; ++a)
        for (int b = 0; b < d.k2; ++b) t.at(x, a, y, b) = Rational(w[i++], total);
    }
  return t;
}

inline std::vector<int> random_output_map(int inputs, int outputs, SplitMix64& rng) {
  std::vector<int> m(static_cast<std::size_t>(inputs));
  for (auto& v : m) v = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(outputs)));
  return m;
}

inline Tensor4 random_local_deterministic(const Dims& d, SplitMix64& rng) {
  return deterministic_point(d, random_output_map(d.n1, d.k1, rng),
                             random_output_map(d.n2, d.k2, rng));
}

/// Random convex mixture of local deterministic points (a classical point,
/// hence non-signalling).
inline Tensor4 random_local_mixture(const Dims& d, SplitMix64& rng, int atoms) {
  Tensor4 acc(d);
  std::vector<long> w(static_cast<std::size_t>(atoms));
  long total = 0;
  for (auto& v : w) {
    v = rng.next_in(1, 9);
    total += v;
  }
  for (int i = 0; i < atoms; ++i)
    acc = acc + Rational(w[static_cast<std::size_t>(i)], total) * random_local_deterministic(d, rng);
  return acc;
}

/// Random signed combination of local deterministic points: a generic
/// element with well-defined marginals.
inline Tensor4 random_ans_point(const Dims& d, SplitMix64& rng, int atoms) {
  Tensor4 acc(d);
  for (int i = 0; i < atoms; ++i)
    acc = acc + random_rational(rng, -6, 6, 4) * random_local_deterministic(d, rng);
  return acc;
}

/// Vertex of the NS-norm unit ball intersected with the marginal subspace,
/// picked by a random integer objective; with a second draw, a mixture of
/// two such vertices. Generic samples sit on the unit sphere, mixtures
/// inside the ball.
inline Tensor4 random_ans_ball_point(const Dims& d, SplitMix64& rng, bool mix = true,
                                     const SolveOptions& opt = {}) {
  const auto vertex = [&] {
    Tensor4 obj(d);
    for (std::size_t i = 0; i < obj.size(); ++i) obj.at_linear(i) = Rational(rng.next_in(-5, 5));
    NsBallLayout lay;
    const LinearProgram lp = make_ns_ball_lp(obj, Sense::maximize, true, &lay);
    const LPOutcome out = solve(lp, opt);
    if (out.status != LPStatus::optimal)
      throw std::logic_error("random_ans_ball_point: ball LP must be solvable");
    std::vector<Rational> coeffs(out.point.begin() + lay.p0,
                                 out.point.begin() + lay.p0 + static_cast<long>(d.size()));
    return Tensor4(d, std::move(coeffs));
  };
  Tensor4 r = vertex();
  if (mix && rng.next_below(2) == 1) {
    const Tensor4 other = vertex();
    const Rational w(rng.next_in(1, 7), 8);
    r = w * r + (Rational(1) - w) * other;
  }
  return r;
}

/// Entries +-1.
inline RatMatrix random_sign_matrix(int n, SplitMix64& rng) {
  RatMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.at(i, j) = Rational(rng.next_below(2) == 0 ? 1 : -1);
  return m;
}

/// Integer entries in [-9, 9] over a fixed denominator.
inline RatMatrix random_rational_matrix(int n, SplitMix64& rng) {
  RatMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.at(i, j) = random_rational(rng, -9, 9, 2);
  return m;
}

}  // namespace nsbell
