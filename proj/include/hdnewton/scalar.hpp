#pragma once

// Exact rational scalars and the conservative rational bounds used by the
// root finders. Everything here is float-free.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace hdnewton {

using Integer = mpz_class;
/// Canonical (gcd-reduced, positive denominator) rational. GMP keeps the
/// canonical form after every arithmetic operation.
using Rational = mpq_class;

inline constexpr unsigned kDefaultSlackBits = 20;

/// Number of bits in |z|; zero counts as one bit.
inline std::size_t bit_length(const Integer& z) {
  return mpz_sizeinbase(z.get_mpz_t(), 2);
}

/// Bits needed to write x down: bit_length(numerator) + bit_length(denominator).
inline std::size_t bit_size(const Rational& x) {
  return bit_length(x.get_num()) + bit_length(x.get_den());
}

inline Integer pow2(std::size_t e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

inline Integer ipow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Rational rpow(const Rational& base, unsigned long e) {
  Rational r(ipow(base.get_num(), e), ipow(base.get_den(), e));
  r.canonicalize();
  return r;
}

/// num/den in lowest terms. (The two-argument mpq_class constructor does
/// not reduce.)
inline Rational ratio(Integer num, Integer den) {
  if (den == 0) throw std::domain_error("ratio: zero denominator");
  Rational r(std::move(num), std::move(den));
  r.canonicalize();
  return r;
}

inline Rational dyadic(long num, std::size_t exponent) {
  Rational r(Integer(num), pow2(exponent));
  r.canonicalize();
  return r;
}

inline Integer floor_of(const Rational& x) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

inline Integer ceil_of(const Rational& x) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

/// "p/q" text form, q omitted when 1.
inline std::string to_string(const Rational& x) { return x.get_str(10); }

/// Parses "p/q", "p", with an optional leading minus. Throws
/// std::invalid_argument on anything else (including a zero denominator).
inline Rational parse_rational(std::string_view text) {
  auto is_digits = [](std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(),
                                     [](char c) { return c >= '0' && c <= '9'; });
  };
  std::string_view body = text;
  if (!body.empty() && body.front() == '-') body.remove_prefix(1);
  const auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{} : body.substr(slash + 1);
  if (!is_digits(num) || (slash != std::string_view::npos && !is_digits(den))) {
    throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
  }
  Rational r;
  if (r.set_str(std::string(text), 10) != 0) {
    throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
  }
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
  r.canonicalize();
  return r;
}

/// Largest integer multiple of `grid` that is <= x.
inline Rational round_down_to_grid(const Rational& x, const Rational& grid) {
  if (sgn(grid) <= 0) throw std::invalid_argument("round_down_to_grid: grid must be positive");
  Rational q = x / grid;
  return Rational(floor_of(q)) * grid;
}

/// Smallest integer L with 2^L >= x, for x > 0.
inline long ceil_log2(const Rational& x) {
  if (sgn(x) <= 0) throw std::invalid_argument("ceil_log2: argument must be positive");
  long e = static_cast<long>(bit_length(x.get_num())) - static_cast<long>(bit_length(x.get_den()));
  // 2^(e-1) < x < 2^(e+1); settle the two candidates exactly.
  auto at_least = [&](long l) {
    return l >= 0 ? Rational(pow2(static_cast<std::size_t>(l))) >= x
                  : Rational(Integer(1), pow2(static_cast<std::size_t>(-l))) >= x;
  };
  while (!at_least(e)) ++e;
  while (at_least(e - 1)) --e;
  return e;
}

/// Largest power of two 2^e <= x, for x > 0.
inline Rational pow2_floor(const Rational& x) {
  long e = ceil_log2(x);
  auto power = [](long l) {
    return l >= 0 ? Rational(pow2(static_cast<std::size_t>(l)))
                  : Rational(Integer(1), pow2(static_cast<std::size_t>(-l)));
  };
  Rational p = power(e);
  return p == x ? p : power(e - 1);
}

/// Rational r with n^(1/k) <= r <= n^(1/k) * (1 + 2^-slack).
///
/// 1/r is a dyadic lower bound on n^(-1/k), so dividing by r keeps dyadic
/// quantities dyadic. Exact integer roots come back exact.
inline Rational nth_root_upper_bound(unsigned long n, unsigned long k, unsigned slack = kDefaultSlackBits) {
  if (n < 1 || k < 1) throw std::invalid_argument("nth_root_upper_bound: n and k must be positive");
  const std::size_t s = slack + bit_length(Integer(n)) + 1;
  Integer scaled = pow2(s * k) / Integer(n);  // floor(2^(sk)/n)
  Integer m;
  mpz_root(m.get_mpz_t(), scaled.get_mpz_t(), k);  // floor((2^(sk)/n)^(1/k))
  Rational r(pow2(s), m);
  r.canonicalize();
  return r;
}

/// Rational s with sqrt(x) <= s <= sqrt(x) * (1 + 2^-slack), for x > 0.
inline Rational sqrt_upper_bound(const Rational& x, unsigned slack = kDefaultSlackBits) {
  if (sgn(x) <= 0) throw std::invalid_argument("sqrt_upper_bound: argument must be positive");
  // sqrt(p/q) = sqrt(p q) / q; ceil(sqrt(p q 4^s)) / (q 2^s) has relative
  // error at most 2^-s / sqrt(p q) <= 2^-s.
  const std::size_t s = slack + 1;
  Integer y = x.get_num() * x.get_den() * pow2(2 * s);
  Integer root;
  mpz_sqrt(root.get_mpz_t(), y.get_mpz_t());
  if (root * root != y) root += 1;
  Rational r(root, x.get_den() * pow2(s));
  r.canonicalize();
  return r;
}

/// 136/25 = 5.44 >= 2e.
inline Rational two_e_upper_bound() { return Rational(136, 25); }

/// Decimal rendering with `digits` significant digits, round-half-even,
/// e.g. "3.0009765625000000000e+00".
inline std::string to_decimal(const Rational& x, unsigned digits = 20) {
  if (digits == 0) digits = 1;
  if (sgn(x) == 0) return "0." + std::string(digits - 1, '0') + "e+00";
  Rational a = abs(x);
  long e = ceil_log2(a);  // rough start for the decimal exponent
  long e10 = static_cast<long>((e * 30103L) / 100000L) - 1;
  auto pow10 = [](long p) {
    Integer t;
    mpz_ui_pow_ui(t.get_mpz_t(), 10, static_cast<unsigned long>(p < 0 ? -p : p));
    return p >= 0 ? Rational(t) : Rational(Integer(1), t);
  };
  // settle e10 = floor(log10(a))
  while (pow10(e10 + 1) <= a) ++e10;
  while (pow10(e10) > a) --e10;
  Rational scaled = a * pow10(static_cast<long>(digits) - 1 - e10);
  Integer q = floor_of(scaled);
  Rational frac = scaled - Rational(q);
  if (frac > Rational(1, 2) || (frac == Rational(1, 2) && mpz_odd_p(q.get_mpz_t()))) q += 1;
  if (q == ipow(Integer(10), digits)) {
    q /= 10;
    ++e10;
  }
  std::string d = q.get_str();
  std::string out = sgn(x) < 0 ? "-" : "";
  out += d.substr(0, 1);
  if (digits > 1) out += "." + d.substr(1);
  char buf[32];
  std::snprintf(buf, sizeof buf, "e%c%02ld", e10 < 0 ? '-' : '+', e10 < 0 ? -e10 : e10);
  return out + buf;
}

/// Exact quotient num/den that is deliberately not gcd-reduced.
///
/// The accelerated iteration combines oracle values with multi-megabit
/// numerators; reducing those would cost a large gcd per step, while the
/// algorithm only ever compares, floors, or cross-multiplies them.
class Fraction {
 public:
  Fraction() : num_(0), den_(1) {}
  Fraction(Integer num, Integer den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_ == 0) throw std::domain_error("Fraction: zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
  }
  explicit Fraction(const Rational& r) : num_(r.get_num()), den_(r.get_den()) {}

  const Integer& num() const { return num_; }
  const Integer& den() const { return den_; }
  int sign() const { return sgn(num_); }

  Rational canonical() const {
    Rational r(num_, den_);
    r.canonicalize();
    return r;
  }

  /// Drops the common power of two from numerator and denominator.
  Fraction& strip_twos() {
    if (num_ == 0) {
      den_ = 1;
      return *this;
    }
    const auto tz = std::min(mpz_scan1(num_.get_mpz_t(), 0), mpz_scan1(den_.get_mpz_t(), 0));
    if (tz > 0) {
      mpz_tdiv_q_2exp(num_.get_mpz_t(), num_.get_mpz_t(), tz);
      mpz_tdiv_q_2exp(den_.get_mpz_t(), den_.get_mpz_t(), tz);
    }
    return *this;
  }

  Integer floor() const {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), num_.get_mpz_t(), den_.get_mpz_t());
    return q;
  }

  friend Fraction operator*(const Fraction& a, const Fraction& b) {
    return Fraction(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Fraction operator/(const Fraction& a, const Fraction& b) {
    if (b.num_ == 0) throw std::domain_error("Fraction: division by zero");
    return Fraction(a.num_ * b.den_, a.den_ * b.num_);
  }
  friend Fraction operator+(const Fraction& a, const Fraction& b) {
    return Fraction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Fraction operator-(const Fraction& a, const Fraction& b) {
    return Fraction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }

  /// -1, 0, 1 as a <, ==, > b.
  friend int compare(const Fraction& a, const Fraction& b) {
    Integer lhs = a.num_ * b.den_;
    Integer rhs = b.num_ * a.den_;
    return cmp(lhs, rhs) < 0 ? -1 : (cmp(lhs, rhs) > 0 ? 1 : 0);
  }
  friend int compare(const Fraction& a, const Rational& b) { return compare(a, Fraction(b)); }

 private:
  Integer num_;
  Integer den_;
};

}  // namespace hdnewton
