#pragma once

#include <stdexcept>

#include "nsbell/rational.hpp"

namespace nsbell {

/// Closed interval of rationals certifying lo <= value <= hi.
struct RationalInterval {
  Rational lo, hi;

  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
  Rational width() const { return hi - lo; }
};

/// Certified rational enclosure of ln(x) for rational x > 0.
///
/// Range-reduces by powers of two to x in [1,2], then sums the odd series
/// ln x = 2 sum t^(2j+1)/(2j+1) with t = (x-1)/(x+1) <= 1/3; the truncation
/// error is bounded by the geometric tail 2 t^(2M+1) / ((2M+1)(1-t^2)).
inline RationalInterval ln_bounds(const Rational& x, int terms = 48) {
  if (x.sign() <= 0) throw std::invalid_argument("ln_bounds: argument must be positive");
  if (terms < 1) throw std::invalid_argument("ln_bounds: need at least one term");

  const auto core = [terms](const Rational& v) {  // v in [1,2]
    const Rational t = (v - Rational(1)) / (v + Rational(1));
    const Rational t2 = t * t;
    Rational power = t, sum;
    for (int j = 0; j < terms; ++j) {
      sum += power / Rational(2 * j + 1);
      power *= t2;
    }
    // power = t^(2*terms+1)
    const Rational tail = power / (Rational(2 * terms + 1) * (Rational(1) - t2));
    return RationalInterval{Rational(2) * sum, Rational(2) * (sum + tail)};
  };

  Rational v = x;
  long k = 0;
  while (v > Rational(2)) {
    v /= Rational(2);
    ++k;
  }
  while (v < Rational(1)) {
    v *= Rational(2);
    --k;
  }
  const RationalInterval base = core(v);
  if (k == 0) return base;
  const RationalInterval ln2 = core(Rational(2));
  if (k > 0)
    return {base.lo + Rational(k) * ln2.lo, base.hi + Rational(k) * ln2.hi};
  return {base.lo + Rational(k) * ln2.hi, base.hi + Rational(k) * ln2.lo};
}

/// Enclosure of the random-game classical threshold (3 ln n - 1) * n.
inline RationalInterval chernoff_threshold_bounds(long n, int terms = 48) {
  if (n < 1) throw std::invalid_argument("chernoff_threshold_bounds: n must be >= 1");
  const RationalInterval ln_n = ln_bounds(Rational(n), terms);
  return {(Rational(3) * ln_n.lo - Rational(1)) * Rational(n),
          (Rational(3) * ln_n.hi - Rational(1)) * Rational(n)};
}

}  // namespace nsbell
