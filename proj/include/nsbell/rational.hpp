#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nsbell {

using Integer = mpz_class;

/// Exact rational scalar. Stored in lowest terms with positive denominator;
/// every operation is exact. Backed by GMP.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(int n) : v_(n) {}                // NOLINT: implicit by design
  Rational(long n) : v_(static_cast<signed long>(n)) {}  // NOLINT
  Rational(long long n) : v_(Integer(std::to_string(n))) {}  // NOLINT
  Rational(long num, long den) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    v_ = mpq_class(static_cast<signed long>(num), static_cast<unsigned long>(den));
    v_.canonicalize();
  }
  Rational(const Integer& num, const Integer& den) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    v_ = mpq_class(num) / mpq_class(den);
    v_.canonicalize();
  }
  explicit Rational(const Integer& num) : v_(num) {}
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  /// Parses "p/q" or "p" with optional sign. Throws std::invalid_argument.
  static Rational from_string(const std::string& s);

  Integer numerator() const { return v_.get_num(); }
  Integer denominator() const { return v_.get_den(); }
  bool is_integer() const { return v_.get_den() == 1; }
  bool is_zero() const { return sgn(v_) == 0; }
  int sign() const { return sgn(v_); }

  const mpq_class& raw() const { return v_; }
  mpq_class& raw() { return v_; }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::invalid_argument("Rational: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  /// Canonical text form: "p/q", or "p" when the denominator is 1.
  std::string str() const {
    std::string s = v_.get_num().get_str();
    if (v_.get_den() != 1) s += "/" + v_.get_den().get_str();
    return s;
  }

  /// Decimal rendering with `sig` significant digits, round-half-even.
  /// Advisory only; the string form above is the exact one.
  std::string decimal(int sig = 20) const;

  double to_double() const { return v_.get_d(); }

 private:
  mpq_class v_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }
inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

inline Rational Rational::from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("Rational: empty string");
  const auto slash = s.find('/');
  const auto check_int = [](const std::string& part) {
    if (part.empty()) throw std::invalid_argument("Rational: bad integer part");
    std::size_t i = (part[0] == '+' || part[0] == '-') ? 1 : 0;
    if (i == part.size()) throw std::invalid_argument("Rational: bad integer part");
    for (; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9')
        throw std::invalid_argument("Rational: bad character in '" + part + "'");
  };
  if (slash == std::string::npos) {
    check_int(s);
    return Rational(Integer(s));
  }
  const std::string num = s.substr(0, slash), den = s.substr(slash + 1);
  check_int(num);
  check_int(den);
  Integer d(den);
  if (d == 0) throw std::invalid_argument("Rational: zero denominator");
  return Rational(Integer(num), d);
}

namespace detail {
inline Integer pow10(long e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(e));
  return r;
}
}  // namespace detail

inline std::string Rational::decimal(int sig) const {
  if (sig < 1) throw std::invalid_argument("decimal: sig must be >= 1");
  if (is_zero()) return "0";
  Integer p = numerator();
  const bool neg = p < 0;
  if (neg) p = -p;
  const Integer q = denominator();

  // e with 10^e <= p/q < 10^(e+1)
  long e = static_cast<long>(mpz_sizeinbase(p.get_mpz_t(), 10)) -
           static_cast<long>(mpz_sizeinbase(q.get_mpz_t(), 10));
  const auto at_least_pow = [&](long ex) {
    // p/q >= 10^ex ?
    if (ex >= 0) return p >= q * detail::pow10(ex);
    return p * detail::pow10(-ex) >= q;
  };
  while (!at_least_pow(e)) --e;
  while (at_least_pow(e + 1)) ++e;

  // sig leading digits, round half to even
  const long shift = sig - 1 - e;
  Integer num = p, den = q;
  if (shift >= 0)
    num *= detail::pow10(shift);
  else
    den *= detail::pow10(-shift);
  Integer quot, rem;
  mpz_fdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  const int c = cmp(rem * 2, den);
  if (c > 0 || (c == 0 && mpz_odd_p(quot.get_mpz_t()))) quot += 1;
  if (quot == detail::pow10(sig)) {
    quot = detail::pow10(sig - 1);
    ++e;
  }
  std::string digits = quot.get_str();
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();

  std::string out;
  if (e >= 0 && e <= sig - 1) {
    const std::size_t ip = static_cast<std::size_t>(e) + 1;
    if (digits.size() <= ip)
      out = digits + std::string(ip - digits.size(), '0');
    else
      out = digits.substr(0, ip) + "." + digits.substr(ip);
  } else if (e < 0 && e >= -5) {
    out = "0." + std::string(static_cast<std::size_t>(-e - 1), '0') + digits;
  } else {
    out = digits.substr(0, 1);
    if (digits.size() > 1) out += "." + digits.substr(1);
    out += "e" + std::to_string(e);
  }
  return neg ? "-" + out : out;
}

}  // namespace nsbell
