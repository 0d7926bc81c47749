#include "geometry.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace eprb {

double canonicalize(double theta) {
  if (!std::isfinite(theta)) throw DomainError("angle must be finite");
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // adding 2pi to a tiny negative remainder can round up to exactly 2pi
  if (r >= kTwoPi) r = 0.0;
  return r;
}

Angle Angle::from_radians(double radians) {
  if (!std::isfinite(radians)) throw DomainError("angle must be finite");
  Angle a;
  a.radians_ = radians;
  if (radians == 0.0)
    a.pi_units_ = Rational(0);
  else
    a.pi_units_.reset();
  return a;
}

Angle Angle::from_pi_units(const Rational& units) {
  Angle a;
  a.pi_units_ = units;
  a.radians_ = units.to_double() * kPi;
  return a;
}

Angle Angle::from_pi_units(std::int64_t num, std::int64_t den) {
  return from_pi_units(Rational(num, den));
}

Angle Angle::canonical() const {
  if (pi_units_) return from_pi_units(mod2(*pi_units_));
  return from_radians(canonicalize(radians_));
}

std::string Angle::str() const {
  if (pi_units_) {
    const Rational& u = *pi_units_;
    if (u.is_zero()) return "0";
    const std::string num = u.num() == 1    ? "pi"
                            : u.num() == -1 ? "-pi"
                                            : std::to_string(u.num()) + "pi";
    if (u.den() == 1) return num;
    return num + "/" + std::to_string(u.den());
  }
  return std::to_string(radians_);
}

Angle operator+(const Angle& a, const Angle& b) {
  Angle r;
  if (a.pi_units_ && b.pi_units_) {
    r.pi_units_ = *a.pi_units_ + *b.pi_units_;
    r.radians_ = r.pi_units_->to_double() * kPi;
  } else {
    r.radians_ = a.radians_ + b.radians_;
    r.pi_units_.reset();
  }
  return r;
}

Angle operator-(const Angle& a, const Angle& b) {
  Angle r;
  if (a.pi_units_ && b.pi_units_) {
    r.pi_units_ = *a.pi_units_ - *b.pi_units_;
    r.radians_ = r.pi_units_->to_double() * kPi;
  } else {
    r.radians_ = a.radians_ - b.radians_;
    r.pi_units_.reset();
  }
  return r;
}

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

double parse_full_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ArgumentError("cannot parse angle literal '" + s + "'");
  }
  if (used != s.size())
    throw ArgumentError("cannot parse angle literal '" + s + "'");
  return v;
}

std::int64_t parse_full_int(const std::string& s) {
  try {
    std::size_t used = 0;
    std::int64_t v = std::stoll(s, &used);
    if (used != s.size()) throw ArgumentError("bad integer '" + s + "'");
    return v;
  } catch (const ArgumentError&) {
    throw;
  } catch (const std::exception&) {
    throw ArgumentError("bad integer '" + s + "'");
  }
}

}  // namespace

Angle parse_angle(const std::string& text) {
  std::string s;
  s.reserve(text.size());
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c)))
      s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s.empty()) throw ArgumentError("empty angle literal");

  int sign = 1;
  if (s.front() == '+' || s.front() == '-') {
    if (s.front() == '-') sign = -1;
    s.erase(s.begin());
  }
  if (s.empty()) throw ArgumentError("empty angle literal");

  const std::size_t pi_pos = s.find("pi");
  if (pi_pos == std::string::npos) {
    const double value = parse_full_double(s);
    return Angle::from_radians(sign * value);
  }

  std::string coef = s.substr(0, pi_pos);
  std::string rest = s.substr(pi_pos + 2);
  if (!coef.empty() && coef.back() == '*') coef.pop_back();

  std::int64_t den = 1;
  if (!rest.empty()) {
    if (rest.front() != '/')
      throw ArgumentError("cannot parse angle literal '" + text + "'");
    rest.erase(rest.begin());
    if (!all_digits(rest))
      throw ArgumentError("denominator must be a positive integer in '" +
                          text + "'");
    den = parse_full_int(rest);
    if (den == 0) throw ArgumentError("zero denominator in '" + text + "'");
  }

  if (coef.empty()) return Angle::from_pi_units(Rational(sign, den));
  if (all_digits(coef))
    return Angle::from_pi_units(Rational(sign * parse_full_int(coef), den));

  // decimal coefficient of pi: no exact fraction to keep
  const double c = parse_full_double(coef);
  return Angle::from_radians(sign * c * kPi / static_cast<double>(den));
}

Angle angle_between(const MeasurementSetting& a, const MeasurementSetting& b) {
  if (a.pi_units() && b.pi_units()) {
    const Rational sep = triangle_fold(*a.pi_units() - *b.pi_units());
    return Angle::from_pi_units(sep);
  }
  double d = canonicalize(a.radians() - b.radians());
  if (d > kPi) d = kTwoPi - d;
  return Angle::from_radians(d);
}

}  // namespace eprb
