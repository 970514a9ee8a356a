// Shared constructions for tests: canonical games and witnesses.
#pragma once

#include <nsbell/tensor.hpp>

namespace fixtures {

using nsbell::Dims;
using nsbell::Rational;
using nsbell::Tensor4;

/// CHSH as a game tensor: uniform questions, win iff a xor b = x and y.
inline Tensor4 chsh_game() {
  Tensor4 m(Dims{2, 2, 2, 2});
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          if (((a + b) % 2) == ((x == 1 && y == 1) ? 1 : 0)) m.at(x, a, y, b) = Rational(1, 4);
  return m;
}

/// The PR box: the non-signalling point winning CHSH with certainty.
inline Tensor4 pr_box() {
  Tensor4 p(Dims{2, 2, 2, 2});
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          if (((a + b) % 2) == ((x == 1 && y == 1) ? 1 : 0)) p.at(x, a, y, b) = Rational(1, 2);
  return p;
}

/// The N x N functional with entry 1 iff x = b, y = 0, a = 0: its first
/// dual norm is N while its classical value and DNS norm are 1.
inline Tensor4 sharpness_witness(int n) {
  Tensor4 m(Dims{n, n, n, n});
  for (int x = 0; x < n; ++x) m.at(x, 0, 0, x) = Rational(1);
  return m;
}

/// A member of C that signals from Bob to Alice: Alice's output equals
/// Bob's input. Its NS norm is K.
inline Tensor4 signalling_c_point() {
  Tensor4 p(Dims{2, 2, 2, 2});
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) p.at(x, y, y, 0) = Rational(1);
  return p;
}

/// CHSH correlation sign pattern [[1, 1], [1, -1]].
inline nsbell::RatMatrix chsh_sign_pattern() {
  nsbell::RatMatrix m(2, 2);
  m.at(0, 0) = Rational(1);
  m.at(0, 1) = Rational(1);
  m.at(1, 0) = Rational(1);
  m.at(1, 1) = Rational(-1);
  return m;
}

}  // namespace fixtures
