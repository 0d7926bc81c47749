#include "tube.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace eprb {

const std::array<TubeFace, 4>& canonical_tube() {
  static const std::array<TubeFace, 4> faces = {
      TubeFace(Rational(0)), TubeFace(Rational(1, 4)),
      TubeFace(Rational(1, 2)), TubeFace(Rational(3, 4))};
  return faces;
}

namespace {

Outcome parity_outcome(std::int64_t n) {
  return ((n % 2) + 2) % 2 == 0 ? Outcome::plus() : Outcome::minus();
}

Rational mod1(const Rational& r) { return r - Rational(r.floor()); }

}  // namespace

Outcome stripe_parity(double shift, double alpha) {
  if (!std::isfinite(alpha) || !std::isfinite(shift))
    throw ArgumentError("height and shift must be finite");
  const double t = alpha - shift;
  // keep floor() exact in int64 and the edge-distance test meaningful
  if (std::fabs(t) > 4.5e15)
    throw ArgumentError("height too large for stripe evaluation");
  if (std::fabs(t - std::round(t)) <= kStripeBoundaryTolerance)
    throw BoundaryError("height within tolerance of a stripe edge");
  return parity_outcome(static_cast<std::int64_t>(std::floor(t)));
}

Outcome stripe_parity_exact(const Rational& shift, const Rational& alpha) {
  const Rational t = alpha - shift;
  if (t.den() == 1) throw BoundaryError("height exactly on a stripe edge");
  return parity_outcome(t.floor());
}

Outcome stripe_value(const TubeFace& face, double alpha) {
  return stripe_parity(face.shift().to_double(), alpha);
}

Outcome stripe_value(const TubeFace& face, const Rational& alpha) {
  return stripe_parity_exact(face.shift(), alpha);
}

Rational tube_correlation_exact(const TubeFace& face_i,
                                const TubeFace& face_j) {
  const Rational delta = triangle_fold(face_i.shift() - face_j.shift());
  return Rational(1) - Rational(2) * delta;
}

double richer_tube_disagreement(double theta) {
  if (!std::isfinite(theta)) throw DomainError("angle must be finite");
  if (theta < -1e-12 || theta > kPi + 1e-12)
    throw DomainError("richer tube separation must lie in [0, pi]");
  const double clamped = std::min(std::max(theta, 0.0), kPi);
  return clamped / kPi;
}

Rational richer_tube_disagreement_exact(const Rational& theta_pi_units) {
  if (theta_pi_units.is_negative() || theta_pi_units > Rational(1))
    throw DomainError("richer tube separation must lie in [0, pi]");
  return theta_pi_units;
}

std::pair<Ball, AntiBall> paired_ball(double alpha) {
  for (const TubeFace& face : canonical_tube())
    stripe_value(face, alpha);  // validates every face, may throw
  return {Ball(alpha), AntiBall(alpha)};
}

double oval_gravity_center(double beta, int face_index) {
  if (!std::isfinite(beta)) throw ArgumentError("ball height must be finite");
  if (face_index < 1 || face_index > 4)
    throw ArgumentError("face index must be in 1..4");
  const std::uint64_t mixed =
      splitmix64(std::bit_cast<std::uint64_t>(beta) ^
                 splitmix64(static_cast<std::uint64_t>(face_index)));
  double u = static_cast<double>(mixed >> 11) * 0x1.0p-53;
  for (int i = 0; i < kOvalMapIterations; ++i) u = 4.0 * u * (1.0 - u);
  return beta + (u - 0.5);
}

OvalBall::OvalBall(double beta) : beta_(beta) {
  // a settled center ambiguous on any face never leaves the source
  for (int face = 1; face <= 4; ++face)
    stripe_value(canonical_tube()[static_cast<std::size_t>(face - 1)],
                 oval_gravity_center(beta, face));
}

Outcome OvalBall::measure(int face_index) {
  if (face_index < 1 || face_index > 4)
    throw ArgumentError("face index must be in 1..4");
  if (consumed_) throw ConsumedError("oval ball already measured");
  consumed_ = true;
  return stripe_value(canonical_tube()[static_cast<std::size_t>(face_index - 1)],
                      oval_gravity_center(beta_, face_index));
}

namespace {

const std::array<Rational, 4>& four_face_shifts() {
  static const std::array<Rational, 4> shifts = {
      Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4)};
  return shifts;
}

}  // namespace

double FourFaceShiftMap::shift_of(const MeasurementSetting& setting) const {
  if (setting.pi_units()) {
    const Rational u = mod2(*setting.pi_units());
    for (const Rational& s : four_face_shifts())
      if (u == s) return s.to_double();
    throw ArgumentError(
        "the four-face tube has no face for angle " + setting.angle().str() +
        "; theta/pi mod 2 must be one of 0, 1/4, 1/2, 3/4");
  }
  const double x = setting.radians() / kPi;
  for (const Rational& s : four_face_shifts())
    if (std::fabs(x - s.to_double()) <= 1e-9) return s.to_double();
  throw ArgumentError(
      "the four-face tube has no face for theta/pi = " + std::to_string(x) +
      "; must be one of 0, 1/4, 1/2, 3/4");
}

std::optional<Rational> FourFaceShiftMap::exact_shift_of(
    const MeasurementSetting& setting) const {
  if (!setting.pi_units()) return std::nullopt;
  const Rational u = mod2(*setting.pi_units());
  for (const Rational& s : four_face_shifts())
    if (u == s) return s;
  throw ArgumentError(
      "the four-face tube has no face for angle " + setting.angle().str() +
      "; theta/pi mod 2 must be one of 0, 1/4, 1/2, 3/4");
}

double ContinuumShiftMap::shift_of(const MeasurementSetting& setting) const {
  return setting.radians() / kPi;  // canonical setting, so in [0, 2)
}

std::optional<Rational> ContinuumShiftMap::exact_shift_of(
    const MeasurementSetting& setting) const {
  return setting.pi_units();
}

const Rational& TableShiftMap::lookup(const MeasurementSetting& setting) const {
  if (!setting.pi_units())
    throw ArgumentError("table shift map needs angles as exact fractions of pi");
  const Rational key = mod2(*setting.pi_units());
  for (const auto& [angle, shift] : entries_)
    if (angle == key) return shift;
  throw ArgumentError("angle " + setting.angle().str() +
                      " is not in this model's shift table");
}

double TableShiftMap::shift_of(const MeasurementSetting& setting) const {
  return lookup(setting).to_double();
}

std::optional<Rational> TableShiftMap::exact_shift_of(
    const MeasurementSetting& setting) const {
  return lookup(setting);
}

HiddenState StripeTubeModel::sample_hidden(Rng& rng) const {
  return HiddenState{2.0 * uniform_unit(rng)};
}

Outcome StripeTubeModel::respond(Side side, const MeasurementSetting& setting,
                                 const HiddenState& hidden) const {
  const Outcome value = stripe_parity(shifts_->shift_of(setting), hidden.lambda);
  if (pairing_ == PairingConvention::eprb_pair && side == Side::two)
    return -value;
  return value;
}

std::vector<WeightedHidden> StripeTubeModel::exact_grid(
    std::span<const MeasurementSetting> settings) const {
  std::vector<Rational> edges{Rational(0), Rational(2)};
  for (const MeasurementSetting& setting : settings) {
    const std::optional<Rational> shift = shifts_->exact_shift_of(setting);
    if (!shift)
      throw ModeError(
          "exact mode for stripe models requires angles given as exact "
          "fractions of pi (for example pi/4)");
    // stripe edges of this face fall at heights shift + n
    const Rational base = mod1(*shift);
    edges.push_back(base);
    edges.push_back(base + Rational(1));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<WeightedHidden> grid;
  grid.reserve(edges.size());
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const Rational length = edges[i + 1] - edges[i];
    if (length.is_zero()) continue;
    const Rational midpoint = (edges[i] + edges[i + 1]) / Rational(2);
    grid.push_back(WeightedHidden{HiddenState{midpoint.to_double()},
                                  length / Rational(2)});
  }
  return grid;
}

std::unique_ptr<LhvModel> make_stripe_model(const std::string& id) {
  if (id == "tube4")
    return std::make_unique<StripeTubeModel>(
        "tube4", std::make_shared<FourFaceShiftMap>(),
        PairingConvention::same_object);
  if (id == "richer-tube")
    return std::make_unique<StripeTubeModel>(
        "richer-tube", std::make_shared<ContinuumShiftMap>(),
        PairingConvention::same_object);
  throw ArgumentError("unknown stripe model '" + id +
                      "'; available: tube4, richer-tube");
}

}  // namespace eprb
