#pragma once
// Exact rational arithmetic for stripe geometry.
//
// Stripe shifts, interval lengths and enumeration weights are all rationals
// with small denominators, so int64 numerator/denominator with 128-bit
// intermediates is enough to keep every piecewise-constant integration exact.

#include <cstdint>
#include <string>

#include "errors.hpp"

namespace eprb {

class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t numerator, std::int64_t denominator) {
    assign(numerator, denominator);
  }
  // NOLINTNEXTLINE(google-explicit-constructor) integers promote implicitly
  Rational(std::int64_t value) : num_(value) {}

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }

  Rational abs() const { return Rational(num_ < 0 ? -num_ : num_, den_); }

  // Largest integer <= num/den (floor division, exact for negatives).
  std::int64_t floor() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_wide(wide(a.num_) * b.den_ + wide(b.num_) * a.den_,
                     wide(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from_wide(wide(a.num_) * b.den_ - wide(b.num_) * a.den_,
                     wide(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_wide(wide(a.num_) * b.num_, wide(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw ArgumentError("rational division by zero");
    return from_wide(wide(a.num_) * b.den_, wide(a.den_) * b.num_);
  }
  friend Rational operator-(const Rational& a) { return Rational(-a.num_, a.den_); }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return wide(a.num_) * b.den_ < wide(b.num_) * a.den_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

 private:
  using wide = __int128;

  static wide wide_gcd(wide a, wide b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      wide t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static Rational from_wide(wide n, wide d) {
    if (d == 0) throw ArgumentError("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const wide g = wide_gcd(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    constexpr wide lo = -static_cast<wide>(INT64_MAX) - 1;
    constexpr wide hi = static_cast<wide>(INT64_MAX);
    if (n < lo || n > hi || d > hi)
      throw ArgumentError("rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }

  void assign(std::int64_t n, std::int64_t d) {
    *this = from_wide(n, d);
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// r reduced modulo 2 into [0, 2); stripe colorings have period 2.
inline Rational mod2(const Rational& r) {
  const Rational half = r / Rational(2);
  return r - Rational(2) * Rational(half.floor());
}

// Triangle fold of a shift difference into a disagreement fraction in [0, 1]:
// distance d and 2 - d give the same stripe overlap.
inline Rational triangle_fold(const Rational& r) {
  const Rational m = mod2(r.abs());
  const Rational mirror = Rational(2) - m;
  return m <= mirror ? m : mirror;
}

}  // namespace eprb
