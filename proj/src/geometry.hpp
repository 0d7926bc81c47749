#pragma once
// Planar measurement geometry shared by every module.
//
// All measurement directions lie in one fixed plane orthogonal to the
// particle separation axis, so a direction is a single angle theta.
// Settings carry a canonical representative in [0, 2pi); the separation
// of two settings lives in [0, pi].  An angle that arrives as an exact
// fraction of pi keeps that fraction alongside its double value, so
// exact-mode arithmetic downstream can stay rational.

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>

#include "errors.hpp"
#include "rational.hpp"

namespace eprb {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Binary spin projection value, +1 or -1.
class Outcome {
 public:
  constexpr Outcome() = default;
  explicit Outcome(int value) : value_(value) {
    if (value != 1 && value != -1)
      throw ArgumentError("outcome must be +1 or -1, got " +
                          std::to_string(value));
  }
  static constexpr Outcome plus() { return Outcome(+1, unchecked{}); }
  static constexpr Outcome minus() { return Outcome(-1, unchecked{}); }

  constexpr int value() const { return value_; }
  constexpr Outcome operator-() const { return Outcome(-value_, unchecked{}); }
  friend constexpr bool operator==(Outcome a, Outcome b) {
    return a.value_ == b.value_;
  }
  friend constexpr bool operator!=(Outcome a, Outcome b) { return !(a == b); }

 private:
  struct unchecked {};
  constexpr Outcome(int value, unchecked) : value_(value) {}
  int value_ = 1;
};

// theta reduced modulo 2pi into [0, 2pi).  Non-finite input is rejected.
double canonicalize(double theta);

// An angle as a double, optionally tagged with the exact fraction theta/pi
// when the value is a known rational multiple of pi.
class Angle {
 public:
  Angle() : pi_units_(Rational(0)) {}

  static Angle from_radians(double radians);
  static Angle from_pi_units(const Rational& units);
  static Angle from_pi_units(std::int64_t num, std::int64_t den);

  double radians() const { return radians_; }
  const std::optional<Rational>& pi_units() const { return pi_units_; }
  bool exact() const { return pi_units_.has_value(); }

  // Representative in [0, 2pi), with the pi fraction reduced mod 2.
  Angle canonical() const;

  // "pi/4", "-3pi/8", "0" for exact angles, decimal radians otherwise.
  std::string str() const;

  friend Angle operator+(const Angle& a, const Angle& b);
  friend Angle operator-(const Angle& a, const Angle& b);

 private:
  double radians_ = 0.0;
  std::optional<Rational> pi_units_;
};

// Accepts decimal radians ("0.785398", "-2") and symbolic fractions of pi
// ("pi", "pi/4", "-3pi/8", "0.5pi").  Integer coefficients of pi parse to
// exact fractions; decimal coefficients stay floating point.
Angle parse_angle(const std::string& text);

// A measurement direction in the plane, stored canonically in [0, 2pi).
class MeasurementSetting {
 public:
  MeasurementSetting() = default;
  explicit MeasurementSetting(const Angle& angle)
      : angle_(angle.canonical()) {}
  static MeasurementSetting from_radians(double radians) {
    return MeasurementSetting(Angle::from_radians(radians));
  }
  static MeasurementSetting from_pi_units(std::int64_t num, std::int64_t den) {
    return MeasurementSetting(Angle::from_pi_units(num, den));
  }

  double radians() const { return angle_.radians(); }
  const std::optional<Rational>& pi_units() const { return angle_.pi_units(); }
  const Angle& angle() const { return angle_; }

 private:
  Angle angle_{};
};

// Unsigned angular separation min(|a - b|, 2pi - |a - b|), in [0, pi].
Angle angle_between(const MeasurementSetting& a, const MeasurementSetting& b);

}  // namespace eprb
