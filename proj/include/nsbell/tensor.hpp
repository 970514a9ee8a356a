#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nsbell/rational.hpp"

namespace nsbell {

/// Dense matrix of exact rationals, row-major.
class RatMatrix {
 public:
  RatMatrix() : rows_(0), cols_(0) {}
  RatMatrix(int rows, int cols)
      : rows_(rows), cols_(cols),
        m_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("RatMatrix: negative size");
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const Rational& at(int i, int j) const { return m_[idx(i, j)]; }
  Rational& at(int i, int j) { return m_[idx(i, j)]; }
  const std::vector<Rational>& data() const { return m_; }

  friend bool operator==(const RatMatrix& a, const RatMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.m_ == b.m_;
  }

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(j);
  }
  int rows_, cols_;
  std::vector<Rational> m_;
};

/// Scenario sizes: Alice inputs/outputs n1/k1, Bob inputs/outputs n2/k2.
struct Dims {
  int n1 = 1, k1 = 1, n2 = 1, k2 = 1;

  std::size_t size() const {
    return static_cast<std::size_t>(n1) * static_cast<std::size_t>(k1) *
           static_cast<std::size_t>(n2) * static_cast<std::size_t>(k2);
  }
  Dims flipped() const { return Dims{n2, k2, n1, k1}; }
  bool square() const { return n1 == n2 && k1 == k2; }

  friend bool operator==(const Dims& a, const Dims& b) {
    return a.n1 == b.n1 && a.k1 == b.k1 && a.n2 == b.n2 && a.k2 == b.k2;
  }
  friend bool operator!=(const Dims& a, const Dims& b) { return !(a == b); }
};

/// 4-index Bell tensor over exact rationals. Canonical index order is
/// (x, a, y, b) row-major: x slowest, b fastest. Values are immutable in
/// spirit; operations return fresh tensors.
class Tensor4 {
 public:
  explicit Tensor4(const Dims& d) : dims_(d), coeffs_(check(d)) {}
  Tensor4(const Dims& d, std::vector<Rational> coeffs) : dims_(d), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != d.size())
      throw std::invalid_argument("Tensor4: coefficient count does not match dims");
    check(d);
  }

  const Dims& dims() const { return dims_; }
  std::size_t size() const { return coeffs_.size(); }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  std::size_t index(int x, int a, int y, int b) const {
    return ((static_cast<std::size_t>(x) * static_cast<std::size_t>(dims_.k1) +
             static_cast<std::size_t>(a)) *
                static_cast<std::size_t>(dims_.n2) +
            static_cast<std::size_t>(y)) *
               static_cast<std::size_t>(dims_.k2) +
           static_cast<std::size_t>(b);
  }
  const Rational& at(int x, int a, int y, int b) const { return coeffs_[index(x, a, y, b)]; }
  Rational& at(int x, int a, int y, int b) { return coeffs_[index(x, a, y, b)]; }
  const Rational& at_linear(std::size_t i) const { return coeffs_[i]; }
  Rational& at_linear(std::size_t i) { return coeffs_[i]; }

  bool nonnegative() const {
    for (const auto& c : coeffs_)
      if (c.sign() < 0) return false;
    return true;
  }
  bool is_zero() const {
    for (const auto& c : coeffs_)
      if (!c.is_zero()) return false;
    return true;
  }

  friend bool operator==(const Tensor4& s, const Tensor4& t) {
    return s.dims_ == t.dims_ && s.coeffs_ == t.coeffs_;
  }
  friend Tensor4 operator+(const Tensor4& s, const Tensor4& t) {
    require_same(s, t);
    Tensor4 r = s;
    for (std::size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] += t.coeffs_[i];
    return r;
  }
  friend Tensor4 operator-(const Tensor4& s, const Tensor4& t) {
    require_same(s, t);
    Tensor4 r = s;
    for (std::size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] -= t.coeffs_[i];
    return r;
  }
  friend Tensor4 operator-(const Tensor4& t) {
    Tensor4 r = t;
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }
  friend Tensor4 operator*(const Rational& c, const Tensor4& t) {
    Tensor4 r = t;
    for (auto& e : r.coeffs_) e *= c;
    return r;
  }

  static void require_same(const Tensor4& s, const Tensor4& t) {
    if (s.dims_ != t.dims_) throw std::invalid_argument("Tensor4: dimension mismatch");
  }

 private:
  static std::size_t check(const Dims& d) {
    if (d.n1 < 1 || d.k1 < 1 || d.n2 < 1 || d.k2 < 1)
      throw std::invalid_argument("Tensor4: dims must be >= 1");
    return d.size();
  }
  Dims dims_;
  std::vector<Rational> coeffs_;
};

/// flip(e_x ox e_a ox e_y ox e_b) = e_y ox e_b ox e_x ox e_a, as a data
/// permutation. An involution.
inline Tensor4 flip(const Tensor4& t) {
  const Dims d = t.dims();
  Tensor4 r(d.flipped());
  for (int x = 0; x < d.n1; ++x)
    for (int a = 0; a < d.k1; ++a)
      for (int y = 0; y < d.n2; ++y)
        for (int b = 0; b < d.k2; ++b) r.at(y, b, x, a) = t.at(x, a, y, b);
  return r;
}

/// <M,P> = sum over all (x,a,y,b) of M * P.
inline Rational pairing(const Tensor4& m, const Tensor4& p) {
  Tensor4::require_same(m, p);
  Rational s;
  for (std::size_t i = 0; i < m.size(); ++i) s += m.coeffs()[i] * p.coeffs()[i];
  return s;
}

/// max_x sum_a max_y sum_b |t|
inline Rational norm_bns1(const Tensor4& t) {
  const Dims d = t.dims();
  Rational outer;
  for (int x = 0; x < d.n1; ++x) {
    Rational sum_a;
    for (int a = 0; a < d.k1; ++a) {
      Rational best_y;
      for (int y = 0; y < d.n2; ++y) {
        Rational sum_b;
        for (int b = 0; b < d.k2; ++b) sum_b += abs(t.at(x, a, y, b));
        if (sum_b > best_y) best_y = sum_b;
      }
      sum_a += best_y;
    }
    if (sum_a > outer) outer = sum_a;
  }
  return outer;
}

inline Rational norm_bns2(const Tensor4& t) { return norm_bns1(flip(t)); }

inline Rational norm_ns(const Tensor4& t) { return max(norm_bns1(t), norm_bns2(t)); }

/// sum_x max_a sum_y max_b |t|  (dual of norm_bns1)
inline Rational dual_norm1(const Tensor4& t) {
  const Dims d = t.dims();
  Rational total;
  for (int x = 0; x < d.n1; ++x) {
    Rational best_a;
    for (int a = 0; a < d.k1; ++a) {
      Rational sum_y;
      for (int y = 0; y < d.n2; ++y) {
        Rational best_b;
        for (int b = 0; b < d.k2; ++b) {
          Rational v = abs(t.at(x, a, y, b));
          if (v > best_b) best_b = std::move(v);
        }
        sum_y += best_b;
      }
      if (sum_y > best_a) best_a = sum_y;
    }
    total += best_a;
  }
  return total;
}

inline Rational dual_norm2(const Tensor4& t) { return dual_norm1(flip(t)); }

/// Probability-distribution set: entrywise nonnegative, each (x,y) slice
/// sums to one.
inline bool membership_c(const Tensor4& t) {
  const Dims d = t.dims();
  if (!t.nonnegative()) return false;
  for (int x = 0; x < d.n1; ++x)
    for (int y = 0; y < d.n2; ++y) {
      Rational s;
      for (int a = 0; a < d.k1; ++a)
        for (int b = 0; b < d.k2; ++b) s += t.at(x, a, y, b);
      if (s != Rational(1)) return false;
    }
  return true;
}

/// Input-independent marginals and constant total mass, when they exist.
struct Marginals {
  RatMatrix alice;  // P(x,a) = sum_b t(x,a,y,b), independent of y
  RatMatrix bob;    // Q(y,b) = sum_a t(x,a,y,b), independent of x
  Rational total;   // z = sum_{a,b} t(x,a,y,b), independent of (x,y)
};

/// Returns the marginal data iff sum_a t is x-independent, sum_b t is
/// y-independent, and the slice totals are constant.
inline std::optional<Marginals> membership_ans(const Tensor4& t) {
  const Dims d = t.dims();
  Marginals m{RatMatrix(d.n1, d.k1), RatMatrix(d.n2, d.k2), Rational(0)};
  for (int x = 0; x < d.n1; ++x)
    for (int a = 0; a < d.k1; ++a) {
      Rational first;
      for (int y = 0; y < d.n2; ++y) {
        Rational s;
        for (int b = 0; b < d.k2; ++b) s += t.at(x, a, y, b);
        if (y == 0)
          first = s;
        else if (s != first)
          return std::nullopt;
      }
      m.alice.at(x, a) = first;
    }
  for (int y = 0; y < d.n2; ++y)
    for (int b = 0; b < d.k2; ++b) {
      Rational first;
      for (int x = 0; x < d.n1; ++x) {
        Rational s;
        for (int a = 0; a < d.k1; ++a) s += t.at(x, a, y, b);
        if (x == 0)
          first = s;
        else if (s != first)
          return std::nullopt;
      }
      m.bob.at(y, b) = first;
    }
  for (int x = 0; x < d.n1; ++x) {
    Rational s;
    for (int a = 0; a < d.k1; ++a) s += m.alice.at(x, a);
    if (x == 0)
      m.total = s;
    else if (s != m.total)
      return std::nullopt;
  }
  for (int y = 0; y < d.n2; ++y) {
    Rational s;
    for (int b = 0; b < d.k2; ++b) s += m.bob.at(y, b);
    if (s != m.total) return std::nullopt;
  }
  return m;
}

/// Non-signalling: a probability distribution whose marginals do not depend
/// on the other party's input.
inline bool membership_ns(const Tensor4& t) {
  if (!membership_c(t)) return false;
  return membership_ans(t).has_value();
}

/// Entries >= 0, others zeroed.
inline Tensor4 positive_part(const Tensor4& t) {
  Tensor4 r(t.dims());
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t.coeffs()[i].sign() > 0) r.at_linear(i) = t.coeffs()[i];
  return r;
}

/// Entries < 0 kept with their sign (so t = positive_part + negative_part).
inline Tensor4 negative_part(const Tensor4& t) {
  Tensor4 r(t.dims());
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t.coeffs()[i].sign() < 0) r.at_linear(i) = t.coeffs()[i];
  return r;
}

/// Uniform non-signalling point: every entry 1/(k1*k2).
inline Tensor4 uniform_ns_point(const Dims& d) {
  Tensor4 r(d);
  const Rational u(1, static_cast<long>(d.k1) * static_cast<long>(d.k2));
  for (int x = 0; x < d.n1; ++x)
    for (int a = 0; a < d.k1; ++a)
      for (int y = 0; y < d.n2; ++y)
        for (int b = 0; b < d.k2; ++b) r.at(x, a, y, b) = u;
  return r;
}

}  // namespace nsbell
