// C surface over the core library: opaque handles, status codes, and a
// thread-local error message.  Out-parameters are written only on EPRB_OK.

#include "eprb/eprb.h"

#include <cstdio>
#include <cstring>
#include <exception>
#include <string>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "inequalities.hpp"
#include "lhv.hpp"
#include "quantum.hpp"
#include "tube.hpp"

struct eprb_sampler {
  eprb::SingletSampler impl;
};

struct eprb_oval {
  eprb::OvalBall impl;
};

struct eprb_ledger {
  eprb::MeasurementLedger impl;
};

namespace {

thread_local std::string t_last_error;

eprb_status status_of(eprb::ErrorCode code) {
  switch (code) {
    case eprb::ErrorCode::argument:
      return EPRB_ERR_ARGUMENT;
    case eprb::ErrorCode::domain:
      return EPRB_ERR_DOMAIN;
    case eprb::ErrorCode::boundary:
      return EPRB_ERR_BOUNDARY;
    case eprb::ErrorCode::consumed:
      return EPRB_ERR_CONSUMED;
    case eprb::ErrorCode::any_all:
      return EPRB_ERR_ANY_ALL;
    case eprb::ErrorCode::mode:
      return EPRB_ERR_MODE;
    case eprb::ErrorCode::consistency:
      return EPRB_ERR_CONSISTENCY;
  }
  return EPRB_ERR_INTERNAL;
}

template <typename Fn>
eprb_status wrap(Fn&& fn) {
  try {
    fn();
    return EPRB_OK;
  } catch (const eprb::Error& e) {
    t_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return EPRB_ERR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown failure";
    return EPRB_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw eprb::ArgumentError(what);
}

eprb::Angle to_angle(const eprb_angle& a) {
  if (a.has_pi_fraction)
    return eprb::Angle::from_pi_units(a.pi_num, a.pi_den);
  return eprb::Angle::from_radians(a.radians);
}

eprb_angle from_angle(const eprb::Angle& a) {
  eprb_angle out;
  out.radians = a.radians();
  if (a.pi_units()) {
    out.has_pi_fraction = 1;
    out.pi_num = a.pi_units()->num();
    out.pi_den = a.pi_units()->den();
  } else {
    out.has_pi_fraction = 0;
    out.pi_num = 0;
    out.pi_den = 1;
  }
  return out;
}

eprb::Side to_side(int side) {
  require(side == 1 || side == 2, "side must be 1 or 2");
  return side == 1 ? eprb::Side::one : eprb::Side::two;
}

const eprb::TubeFace& face_at(int index) {
  require(index >= 1 && index <= 4, "face index must be in 1..4");
  return eprb::canonical_tube()[static_cast<std::size_t>(index - 1)];
}

void copy_string(char* dst, std::size_t cap, const std::string& src) {
  std::snprintf(dst, cap, "%s", src.c_str());
}

}  // namespace

extern "C" {

const char* eprb_status_name(eprb_status status) {
  switch (status) {
    case EPRB_OK:
      return "ok";
    case EPRB_ERR_ARGUMENT:
      return "argument";
    case EPRB_ERR_DOMAIN:
      return "domain";
    case EPRB_ERR_BOUNDARY:
      return "boundary";
    case EPRB_ERR_CONSUMED:
      return "consumed";
    case EPRB_ERR_ANY_ALL:
      return "any-all";
    case EPRB_ERR_MODE:
      return "mode";
    case EPRB_ERR_CONSISTENCY:
      return "consistency";
    case EPRB_ERR_INTERNAL:
      return "internal";
  }
  return "unknown";
}

const char* eprb_last_error_message(void) { return t_last_error.c_str(); }

const char* eprb_version(void) { return "0.1.0"; }

eprb_status eprb_angle_from_radians(double radians, eprb_angle* out) {
  return wrap([&] {
    require(out != nullptr, "null output pointer");
    *out = from_angle(eprb::Angle::from_radians(radians));
  });
}

eprb_status eprb_angle_from_pi_fraction(int64_t num, int64_t den,
                                        eprb_angle* out) {
  return wrap([&] {
    require(out != nullptr, "null output pointer");
    *out = from_angle(eprb::Angle::from_pi_units(num, den));
  });
}

eprb_status eprb_angle_parse(const char* text, eprb_angle* out) {
  return wrap([&] {
    require(text != nullptr, "null angle text");
    require(out != nullptr, "null output pointer");
    *out = from_angle(eprb::parse_angle(text));
  });
}

eprb_status eprb_canonicalize(double theta, double* out) {
  return wrap([&] {
    require(out != nullptr, "null output pointer");
    *out = eprb::canonicalize(theta);
  });
}

eprb_status eprb_angle_between(eprb_angle a, eprb_angle b, eprb_angle* out) {
  return wrap([&] {
    require(out != nullptr, "null output pointer");
    const eprb::MeasurementSetting sa(to_angle(a));
    const eprb::MeasurementSetting sb(to_angle(b));
    *out = from_angle(eprb::angle_between(sa, sb));
  });
}

eprb_status eprb_p_same(double theta, double* out) {
  return wrap([&] {
    require(out != nullptr, "null output pointer");
    *out = eprb::p_same(theta);
  });
}

eprb_status eprb_p_prime(double theta, double* out) {
  return wrap([&] {
    require(out != nullptr, "null output pointer");
    *out = eprb::p_prime(theta);
  });
}

eprb_status eprb_correlation_qm(double theta, double* out) {
  return wrap([&] {
    require(out != nullptr, "null output pointer");
    *out = eprb::correlation_qm(theta);
  });
}

eprb_status eprb_joint(double theta, double out_probs[4]) {
  return wrap([&] {
    require(out_probs != nullptr, "null output pointer");
    const eprb::MeasurementSetting a;
    const eprb::MeasurementSetting b(eprb::Angle::from_radians(theta));
    const eprb::JointDistribution d = eprb::joint_distribution(a, b);
    out_probs[0] = d.p_pp;
    out_probs[1] = d.p_pm;
    out_probs[2] = d.p_mp;
    out_probs[3] = d.p_mm;
  });
}

eprb_status eprb_partner_value(int measured, int* out) {
  return wrap([&] {
    require(out != nullptr, "null output pointer");
    const eprb::MeasurementSetting any;
    *out = eprb::conditional_partner_state(any, eprb::Outcome(measured))
               .value.value();
  });
}

eprb_status eprb_sampler_new(eprb_angle a, eprb_angle b, uint64_t seed,
                             eprb_sampler** out) {
  return wrap([&] {
    require(out != nullptr, "null output pointer");
    const eprb::MeasurementSetting sa(to_angle(a));
    const eprb::MeasurementSetting sb(to_angle(b));
    *out = new eprb_sampler{eprb::SingletSampler(sa, sb, seed)};
  });
}

eprb_status eprb_sampler_next(eprb_sampler* sampler, int* out_first,
                              int* out_second) {
  return wrap([&] {
    require(sampler != nullptr, "null sampler");
    require(out_first != nullptr && out_second != nullptr,
            "null output pointer");
    const auto [e1, e2] = sampler->impl.next();
    *out_first = e1.value();
    *out_second = e2.value();
  });
}

eprb_status eprb_sampler_tally(eprb_sampler* sampler, uint64_t n,
                               uint64_t out_counts[4]) {
  return wrap([&] {
    require(sampler != nullptr, "null sampler");
    require(out_counts != nullptr, "null output pointer");
    uint64_t counts[4] = {0, 0, 0, 0};
    for (uint64_t i = 0; i < n; ++i) {
      const auto [e1, e2] = sampler->impl.next();
      const int row = e1 == eprb::Outcome::plus() ? 0 : 2;
      const int col = e2 == eprb::Outcome::plus() ? 0 : 1;
      ++counts[row + col];
    }
    for (int i = 0; i < 4; ++i) out_counts[i] = counts[i];
  });
}

void eprb_sampler_free(eprb_sampler* sampler) { delete sampler; }

eprb_status eprb_tube_face_value(int face_index, double alpha, int* out) {
  return wrap([&] {
    require(out != nullptr, "null output pointer");
    *out = eprb::stripe_value(face_at(face_index), alpha).value();
  });
}

eprb_status eprb_tube_correlation_exact(int face_i, int face_j, double* out,
                                        int64_t* out_num, int64_t* out_den) {
  return wrap([&] {
    require(out != nullptr, "null output pointer");
    const eprb::Rational corr =
        eprb::tube_correlation_exact(face_at(face_i), face_at(face_j));
    *out = corr.to_double();
    if (out_num != nullptr) *out_num = corr.num();
    if (out_den != nullptr) *out_den = corr.den();
  });
}

eprb_status eprb_tube_correlation_mc(int face_i, int face_j, uint64_t samples,
                                     uint64_t seed, uint32_t workers,
                                     double* out_estimate,
                                     double* out_standard_error) {
  return wrap([&] {
    require(out_estimate != nullptr, "null output pointer");
    face_at(face_i);
    face_at(face_j);
    const eprb::StripeTubeModel model(
        "tube4", std::make_shared<eprb::FourFaceShiftMap>(),
        eprb::PairingConvention::same_object);
    const auto setting = [](int face) {
      return eprb::MeasurementSetting::from_pi_units(face - 1, 4);
    };
    const eprb::Estimate e = eprb::estimate_correlation(
        model, setting(face_i), setting(face_j), samples, seed, workers);
    *out_estimate = e.value;
    if (out_standard_error != nullptr) *out_standard_error = e.standard_error;
  });
}

eprb_status eprb_richer_tube_disagreement(double theta, double* out) {
  return wrap([&] {
    require(out != nullptr, "null output pointer");
    *out = eprb::richer_tube_disagreement(theta);
  });
}

eprb_status eprb_oval_new(double beta, eprb_oval** out) {
  return wrap([&] {
    require(out != nullptr, "null output pointer");
    *out = new eprb_oval{eprb::OvalBall(beta)};
  });
}

eprb_status eprb_oval_measure(eprb_oval* ball, int face_index, int* out) {
  return wrap([&] {
    require(ball != nullptr, "null oval ball");
    require(out != nullptr, "null output pointer");
    *out = ball->impl.measure(face_index).value();
  });
}

void eprb_oval_free(eprb_oval* ball) { delete ball; }

eprb_status eprb_ledger_new(int inference_enabled, eprb_ledger** out) {
  return wrap([&] {
    require(out != nullptr, "null output pointer");
    *out = new eprb_ledger{eprb::MeasurementLedger(inference_enabled != 0)};
  });
}

eprb_status eprb_ledger_record(eprb_ledger* ledger, uint64_t pair_id, int side,
                               eprb_angle setting, int outcome) {
  return wrap([&] {
    require(ledger != nullptr, "null ledger");
    ledger->impl.record_measurement(pair_id, to_side(side),
                                    eprb::MeasurementSetting(to_angle(setting)),
                                    eprb::Outcome(outcome));
  });
}

eprb_status eprb_ledger_infer(eprb_ledger* ledger, uint64_t pair_id,
                              int from_side, eprb_angle setting, int* out) {
  return wrap([&] {
    require(ledger != nullptr, "null ledger");
    require(out != nullptr, "null output pointer");
    *out = ledger->impl
               .infer_partner_value(pair_id, to_side(from_side),
                                    eprb::MeasurementSetting(to_angle(setting)))
               .value();
  });
}

eprb_status eprb_ledger_direct_count(const eprb_ledger* ledger,
                                     uint64_t pair_id, int side, int* out) {
  return wrap([&] {
    require(ledger != nullptr, "null ledger");
    require(out != nullptr, "null output pointer");
    *out = ledger->impl.direct_count(pair_id, to_side(side));
  });
}

eprb_status eprb_ledger_value_count(const eprb_ledger* ledger,
                                    uint64_t pair_id, int* out) {
  return wrap([&] {
    require(ledger != nullptr, "null ledger");
    require(out != nullptr, "null output pointer");
    *out = ledger->impl.value_count(pair_id);
  });
}

void eprb_ledger_free(eprb_ledger* ledger) { delete ledger; }

eprb_status eprb_bell_check(const char* inequality, const char* model,
                            const eprb_angle* angles, int n_angles,
                            const char* mode, uint64_t samples, uint64_t seed,
                            uint32_t workers, eprb_report* out) {
  return wrap([&] {
    require(out != nullptr, "null output pointer");
    require(inequality != nullptr, "null inequality name");
    require(model != nullptr, "null model name");
    require(mode != nullptr, "null mode name");
    require(angles != nullptr, "null angle array");
    require(n_angles >= 0 && n_angles <= 3, "angle count must be 0..3");

    std::vector<eprb::Angle> parsed;
    parsed.reserve(static_cast<std::size_t>(n_angles));
    for (int i = 0; i < n_angles; ++i) parsed.push_back(to_angle(angles[i]));

    const eprb::InequalityReport report = eprb::check_model(
        std::string(model), eprb::parse_inequality(inequality), parsed,
        eprb::parse_eval_mode(mode), samples, seed, workers);

    eprb_report r;
    std::memset(&r, 0, sizeof(r));
    copy_string(r.inequality, sizeof(r.inequality),
                eprb::to_string(report.inequality));
    copy_string(r.model, sizeof(r.model), report.model);
    copy_string(r.mode, sizeof(r.mode), eprb::to_string(report.mode));
    r.n_angles = static_cast<int>(report.angles.size());
    for (std::size_t i = 0; i < report.angles.size() && i < 3; ++i)
      r.angles[i] = report.angles[i];
    r.lhs = report.lhs;
    r.rhs = report.rhs;
    r.slack = report.slack;
    r.has_standard_error = report.standard_error.has_value() ? 1 : 0;
    r.standard_error = report.standard_error.value_or(0.0);
    r.violated = report.verdict == eprb::Verdict::violated ? 1 : 0;
    *out = r;
  });
}

}  // extern "C"
