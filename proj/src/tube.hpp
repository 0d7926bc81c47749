#pragma once
// Striped-tube response geometry and the chaotic oval-ball variant.
//
// A face of the tube is painted in unit stripes along its axis; the stripe
// [Z+n, Z+n+1) carries value +1 for n even and -1 for n odd, so a ball at
// height alpha pushed to a face with shift Z reports
//     k(Z, alpha) = (-1)^floor(alpha - Z).
// Two faces whose shifts differ by delta disagree on the height fraction
// fold(delta) = min(delta mod 2, 2 - delta mod 2), hence the same-ball
// correlation over uniform heights is the triangle wave 1 - 2 fold(delta).
// Mapping an angle theta in [0, pi] to the shift theta/pi gives the richer
// tube, whose disagreement theta/pi meets the quantum (1 - cos theta)/2
// only at theta in {0, pi/2, pi}.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "geometry.hpp"
#include "lhv.hpp"
#include "rational.hpp"
#include "rng.hpp"

namespace eprb {

// Heights closer than this to a stripe edge are ambiguous and rejected.
inline constexpr double kStripeBoundaryTolerance = 1e-12;
// Iterations of the expanding map that settles an oval ball's dust. 64
// doublings push any 1e-9 height difference past the full mantissa width.
inline constexpr int kOvalMapIterations = 64;

class TubeFace {
 public:
  explicit TubeFace(const Rational& shift) : shift_(shift) {
    if (shift.is_negative() || shift >= Rational(1))
      throw ArgumentError("face shift must lie in [0, 1), got " + shift.str());
  }
  const Rational& shift() const { return shift_; }

 private:
  Rational shift_;
};

// The four canonical faces, shifts 0, 1/4, 1/2, 3/4.
const std::array<TubeFace, 4>& canonical_tube();

// Stripe parity at height alpha for an arbitrary shift (no [0,1) bound).
Outcome stripe_parity(double shift, double alpha);
Outcome stripe_parity_exact(const Rational& shift, const Rational& alpha);

// k-value of a ball at height alpha on a face: (-1)^floor(alpha - Z).
Outcome stripe_value(const TubeFace& face, double alpha);
Outcome stripe_value(const TubeFace& face, const Rational& alpha);

// Exact average of the k-value product over uniform heights on one color
// period: 1 - 2 fold(Z_i - Z_j), by interval summation rather than sampling.
Rational tube_correlation_exact(const TubeFace& face_i, const TubeFace& face_j);

// Disagreement probability of the richer tube at separation theta in
// [0, pi]: the shift is theta/pi and so is the disagreement.
double richer_tube_disagreement(double theta);
Rational richer_tube_disagreement_exact(const Rational& theta_pi_units);

class AntiBall;

// A ball with a definite height, readable at any face.
class Ball {
 public:
  Outcome value_at(const TubeFace& face) const {
    return stripe_value(face, alpha_);
  }
  double alpha() const { return alpha_; }

 private:
  friend std::pair<Ball, AntiBall> paired_ball(double alpha);
  explicit Ball(double alpha) : alpha_(alpha) {}
  double alpha_;
};

// The color-inverted partner of a Ball: same height, negated k-values.
class AntiBall {
 public:
  Outcome value_at(const TubeFace& face) const {
    return -stripe_value(face, alpha_);
  }
  double alpha() const { return alpha_; }

 private:
  friend std::pair<Ball, AntiBall> paired_ball(double alpha);
  explicit AntiBall(double alpha) : alpha_(alpha) {}
  double alpha_;
};

// A pair sharing one height whose values are opposite at every face,
// mirroring the singlet's perfect anticorrelation at equal settings.
// The height must clear every canonical face's stripe edges.
std::pair<Ball, AntiBall> paired_ball(double alpha);

// Where the dust inside an oval ball of height beta settles when pushed to
// a face: g = beta + (u - 1/2), with u produced by iterating the logistic
// map x -> 4x(1-x) kOvalMapIterations times from a hash of (beta, face).
// Deterministic in (beta, face) and sensitive to both.
double oval_gravity_center(double beta, int face_index);

// A ball whose k-value is fixed at creation but reachable only by one
// destructive measurement; there is no inspection path.
class OvalBall {
 public:
  // Rejects heights whose settled center would be ambiguous on any face.
  explicit OvalBall(double beta);

  OvalBall(const OvalBall&) = delete;
  OvalBall& operator=(const OvalBall&) = delete;
  OvalBall(OvalBall&& other) noexcept
      : beta_(other.beta_), consumed_(other.consumed_) {
    other.consumed_ = true;
  }
  OvalBall& operator=(OvalBall&& other) noexcept {
    beta_ = other.beta_;
    consumed_ = other.consumed_;
    other.consumed_ = true;
    return *this;
  }

  // The single value-producing call; any further use fails.
  Outcome measure(int face_index);
  bool consumed() const { return consumed_; }

 private:
  double beta_;
  bool consumed_ = false;
};

// Assigns each measurement setting a stripe shift.
class ShiftMap {
 public:
  virtual ~ShiftMap() = default;
  virtual double shift_of(const MeasurementSetting& setting) const = 0;
  virtual std::optional<Rational> exact_shift_of(
      const MeasurementSetting& setting) const = 0;
};

// Only the four canonical shifts exist: theta/pi mod 2 must land on
// {0, 1/4, 1/2, 3/4}; other settings have no face to push the ball to.
class FourFaceShiftMap final : public ShiftMap {
 public:
  double shift_of(const MeasurementSetting& setting) const override;
  std::optional<Rational> exact_shift_of(
      const MeasurementSetting& setting) const override;
};

// The richer tube: every shift theta/pi in [0, 2) exists.
class ContinuumShiftMap final : public ShiftMap {
 public:
  double shift_of(const MeasurementSetting& setting) const override;
  std::optional<Rational> exact_shift_of(
      const MeasurementSetting& setting) const override;
};

// Explicit finite table from exact angles (as fractions of pi) to exact
// shifts; used to build arbitrary stripe-family models in tests.
class TableShiftMap final : public ShiftMap {
 public:
  explicit TableShiftMap(std::vector<std::pair<Rational, Rational>> entries)
      : entries_(std::move(entries)) {}
  double shift_of(const MeasurementSetting& setting) const override;
  std::optional<Rational> exact_shift_of(
      const MeasurementSetting& setting) const override;

 private:
  const Rational& lookup(const MeasurementSetting& setting) const;
  std::vector<std::pair<Rational, Rational>> entries_;
};

// Stripe responses as a local model: the hidden state is a height, uniform
// on one color period [0, 2); each side reads its face's stripe there.
class StripeTubeModel final : public LhvModel {
 public:
  StripeTubeModel(std::string id, std::shared_ptr<const ShiftMap> shifts,
                  PairingConvention pairing)
      : id_(std::move(id)), shifts_(std::move(shifts)), pairing_(pairing) {}

  std::string id() const override { return id_; }
  PairingConvention pairing() const override { return pairing_; }
  HiddenState sample_hidden(Rng& rng) const override;
  Outcome respond(Side side, const MeasurementSetting& setting,
                  const HiddenState& hidden) const override;
  bool has_exact_grid() const override { return true; }
  // Cells are the intervals cut out of [0, 2) by every face's stripe
  // edges; each cell is represented by its midpoint, weight length/2.
  std::vector<WeightedHidden> exact_grid(
      std::span<const MeasurementSetting> settings) const override;

 private:
  std::string id_;
  std::shared_ptr<const ShiftMap> shifts_;
  PairingConvention pairing_;
};

// Built-in stripe models: "tube4" (four faces) and "richer-tube"
// (continuum of shifts), both reading one shared ball.
std::unique_ptr<LhvModel> make_stripe_model(const std::string& id);

}  // namespace eprb
