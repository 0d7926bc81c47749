#pragma once
// Closed-form singlet statistics and a seeded two-step sampler.
//
// Two spin-1/2 particles in the singlet state are measured along coplanar
// directions a and b separated by theta.  Measuring particle 1 first gives
// epsilon1, a fair coin; the partner is then left with the definite value
// -epsilon1 along a (wave packet reduction).  A measurement of particle 2
// along b reproduces that prepared value with probability
//     P(theta)  = (1 + cos theta) / 2
// and flips it with probability
//     P'(theta) = (1 - cos theta) / 2.
// The product average is <s1(a) s2(b)> = -cos theta, and the joint law of
// the raw outcome pair is P(e1, e2) = (1 + e1*e2*E) / 4 with E = -cos theta:
// the unique distribution with uniform marginals reproducing E.

#include <cstdint>
#include <utility>

#include "geometry.hpp"
#include "rng.hpp"

namespace eprb {

// P(theta) = (1 + cos theta)/2: chance that the partner's outcome along b
// agrees with its prepared value along a.
double p_same(double theta);

// P'(theta) = (1 - cos theta)/2 = 1 - P(theta).
double p_prime(double theta);

// <s1(a) s2(b)> = -cos(angle_between(a, b)) = 2 P'(theta) - 1.
double correlation_qm(const MeasurementSetting& a, const MeasurementSetting& b);
double correlation_qm(double theta);

struct JointDistribution {
  double p_pp = 0.0;
  double p_pm = 0.0;
  double p_mp = 0.0;
  double p_mm = 0.0;

  double prob(Outcome first, Outcome second) const {
    if (first == Outcome::plus())
      return second == Outcome::plus() ? p_pp : p_pm;
    return second == Outcome::plus() ? p_mp : p_mm;
  }
};

// P(e1, e2) = (1 + e1*e2*E)/4 with E = -cos(angle_between(a, b)).
JointDistribution joint_distribution(const MeasurementSetting& a,
                                     const MeasurementSetting& b);

struct PreparedPartnerState {
  MeasurementSetting setting;
  Outcome value;
};

// After measuring `measured` along a, the partner is prepared in (a, -measured).
PreparedPartnerState conditional_partner_state(const MeasurementSetting& a,
                                               Outcome measured);

// Draws raw outcome pairs from joint_distribution(a, b), built sequentially:
// epsilon1 is a fair coin, epsilon2 equals -epsilon1 with probability
// P(theta) and +epsilon1 otherwise.  One instance owns one random stream;
// identical (settings, seed) reproduce the identical stream.
class SingletSampler {
 public:
  SingletSampler(const MeasurementSetting& a, const MeasurementSetting& b,
                 std::uint64_t seed);

  std::pair<Outcome, Outcome> next();

 private:
  double p_keep_;  // P(theta): probability the prepared value is reproduced
  Rng rng_;
};

}  // namespace eprb
