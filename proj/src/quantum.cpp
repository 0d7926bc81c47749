#include "quantum.hpp"

#include <cmath>

namespace eprb {

double p_same(double theta) {
  if (!std::isfinite(theta)) throw DomainError("angle must be finite");
  return (1.0 + std::cos(theta)) / 2.0;
}

double p_prime(double theta) {
  if (!std::isfinite(theta)) throw DomainError("angle must be finite");
  return (1.0 - std::cos(theta)) / 2.0;
}

double correlation_qm(double theta) {
  if (!std::isfinite(theta)) throw DomainError("angle must be finite");
  return -std::cos(theta);
}

double correlation_qm(const MeasurementSetting& a,
                      const MeasurementSetting& b) {
  return correlation_qm(angle_between(a, b).radians());
}

JointDistribution joint_distribution(const MeasurementSetting& a,
                                     const MeasurementSetting& b) {
  const double e = correlation_qm(a, b);
  JointDistribution d;
  d.p_pp = d.p_mm = (1.0 + e) / 4.0;
  d.p_pm = d.p_mp = (1.0 - e) / 4.0;
  return d;
}

PreparedPartnerState conditional_partner_state(const MeasurementSetting& a,
                                               Outcome measured) {
  return PreparedPartnerState{a, -measured};
}

SingletSampler::SingletSampler(const MeasurementSetting& a,
                               const MeasurementSetting& b, std::uint64_t seed)
    : p_keep_(p_same(angle_between(a, b).radians())), rng_(seed) {}

std::pair<Outcome, Outcome> SingletSampler::next() {
  const Outcome e1 = uniform_sign(rng_) > 0 ? Outcome::plus() : Outcome::minus();
  // u in [0,1): u < P(theta) keeps the prepared value -e1, else it flips
  const Outcome e2 = uniform_unit(rng_) < p_keep_ ? -e1 : e1;
  return {e1, e2};
}

}  // namespace eprb
