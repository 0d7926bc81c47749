#include "inequalities.hpp"

#include <array>
#include <cmath>

#include "quantum.hpp"
#include "tube.hpp"

namespace eprb {

const char* to_string(InequalityId id) {
  return id == InequalityId::star ? "star" : "doublestar";
}

const char* to_string(EvalMode mode) {
  return mode == EvalMode::exact ? "exact" : "mc";
}

const char* to_string(Verdict verdict) {
  return verdict == Verdict::satisfied ? "satisfied" : "violated";
}

InequalityId parse_inequality(const std::string& text) {
  if (text == "star") return InequalityId::star;
  if (text == "doublestar") return InequalityId::doublestar;
  throw ArgumentError("unknown inequality '" + text +
                      "'; expected star or doublestar");
}

EvalMode parse_eval_mode(const std::string& text) {
  if (text == "exact") return EvalMode::exact;
  if (text == "mc" || text == "monte-carlo") return EvalMode::monte_carlo;
  throw ArgumentError("unknown mode '" + text + "'; expected exact or mc");
}

namespace {

std::size_t required_angles(InequalityId id) {
  return id == InequalityId::star ? 3 : 2;
}

void validate_angles(InequalityId id, std::span<const Angle> angles) {
  if (angles.size() != required_angles(id))
    throw ArgumentError(std::string(to_string(id)) + " needs " +
                        std::to_string(required_angles(id)) + " angles, got " +
                        std::to_string(angles.size()));
  double sum = 0.0;
  for (const Angle& a : angles) {
    if (a.radians() < 0.0)
      throw DomainError("inequality angles must be nonnegative");
    sum += a.radians();
  }
  // beyond pi the composite separation is no longer the plain angle sum
  if (sum > kPi + 1e-12)
    throw DomainError("inequality angle sum must not exceed pi");
}

// The coplanar vector chain v0 = 0, v_k = t1 + ... + tk whose consecutive
// separations are the inequality angles.
std::array<MeasurementSetting, 4> chain_settings(std::span<const Angle> angles) {
  std::array<MeasurementSetting, 4> v;
  Angle acc;
  v[0] = MeasurementSetting(acc);
  for (std::size_t i = 0; i < angles.size(); ++i) {
    acc = acc + angles[i];
    v[i + 1] = MeasurementSetting(acc);
  }
  return v;
}

InequalityReport base_report(InequalityId id, std::string model, EvalMode mode,
                             std::span<const Angle> angles) {
  InequalityReport r;
  r.inequality = id;
  r.model = std::move(model);
  r.mode = mode;
  r.angles.reserve(angles.size());
  for (const Angle& a : angles) r.angles.push_back(a.radians());
  return r;
}

void finish_exact(InequalityReport& r) {
  r.slack = r.lhs - r.rhs;
  r.verdict = r.slack >= -kExactVerdictTolerance ? Verdict::satisfied
                                                 : Verdict::violated;
}

InequalityReport closed_form_star(const ProbabilityFn& pprime,
                                  std::span<const Angle> angles,
                                  std::string model) {
  validate_angles(InequalityId::star, angles);
  InequalityReport r =
      base_report(InequalityId::star, std::move(model), EvalMode::exact, angles);
  const Angle total = angles[0] + angles[1] + angles[2];
  r.lhs = pprime(angles[0].radians()) + pprime(angles[1].radians()) +
          pprime(angles[2].radians());
  r.rhs = pprime(total.radians());
  finish_exact(r);
  return r;
}

InequalityReport closed_form_doublestar(const ProbabilityFn& pprime,
                                        const ProbabilityFn& psame,
                                        std::span<const Angle> angles,
                                        std::string model) {
  validate_angles(InequalityId::doublestar, angles);
  InequalityReport r = base_report(InequalityId::doublestar, std::move(model),
                                   EvalMode::exact, angles);
  const Angle total = angles[0] + angles[1];
  for (const double x :
       {angles[0].radians(), angles[1].radians(), total.radians()}) {
    if (std::fabs(pprime(x) + psame(x) - 1.0) > 1e-9)
      throw ConsistencyError(
          "agreement and disagreement functions are inconsistent: "
          "P(x) + P'(x) differs from 1 at x = " +
          std::to_string(x));
  }
  r.lhs = pprime(angles[0].radians()) + pprime(angles[1].radians()) +
          psame(total.radians());
  r.rhs = 1.0;
  finish_exact(r);
  return r;
}

// Flip probability P' of one chain link: the raw response disagreement
// for one shared object, its complement for a color-inverted pair (whose
// responses differ trivially at equal settings).
Rational exact_link_pprime(const LhvModel& model, const MeasurementSetting& x,
                           const MeasurementSetting& y) {
  const Rational d = exact_disagreement(model, x, y);
  return model.pairing() == PairingConvention::same_object ? d
                                                           : Rational(1) - d;
}

InequalityReport model_exact(const LhvModel& model, InequalityId id,
                             std::span<const Angle> angles) {
  InequalityReport r = base_report(id, model.id(), EvalMode::exact, angles);
  const auto v = chain_settings(angles);
  Rational lhs(0);
  Rational rhs(0);
  if (id == InequalityId::star) {
    lhs = exact_link_pprime(model, v[0], v[1]) +
          exact_link_pprime(model, v[1], v[2]) +
          exact_link_pprime(model, v[2], v[3]);
    rhs = exact_link_pprime(model, v[0], v[3]);
  } else {
    lhs = exact_link_pprime(model, v[0], v[1]) +
          exact_link_pprime(model, v[1], v[2]) +
          (Rational(1) - exact_link_pprime(model, v[0], v[2]));
    rhs = Rational(1);
  }
  r.lhs = lhs.to_double();
  r.rhs = rhs.to_double();
  r.slack_exact = lhs - rhs;
  r.slack = r.slack_exact->to_double();
  r.verdict = r.slack >= -kExactVerdictTolerance ? Verdict::satisfied
                                                 : Verdict::violated;
  return r;
}

struct Term {
  double value = 0.0;
  double se = 0.0;
};

Term model_mc_pprime(const LhvModel& model, const MeasurementSetting& x,
                     const MeasurementSetting& y, std::uint64_t n,
                     std::uint64_t seed, unsigned workers) {
  const Estimate d = estimate_disagreement(model, x, y, n, seed, workers);
  const double p = model.pairing() == PairingConvention::same_object
                       ? d.value
                       : 1.0 - d.value;
  return Term{p, d.standard_error};
}

Term qm_mc_pprime(const MeasurementSetting& x, const MeasurementSetting& y,
                  std::uint64_t n, std::uint64_t seed, unsigned workers) {
  // P' is the chance the partner's outcome matches epsilon1 (the flip of
  // its prepared value), so count equal raw outcomes.
  const std::uint64_t equal = chunked_count(
      n, seed, workers,
      [&x, &y](std::uint64_t chunk_n, std::uint64_t chunk_seed) {
        SingletSampler sampler(x, y, chunk_seed);
        std::uint64_t c = 0;
        for (std::uint64_t i = 0; i < chunk_n; ++i) {
          const auto [e1, e2] = sampler.next();
          if (e1 == e2) ++c;
        }
        return c;
      });
  const double p = static_cast<double>(equal) / static_cast<double>(n);
  const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  return Term{p, se};
}

using LinkPprimeFn = std::function<Term(
    const MeasurementSetting&, const MeasurementSetting&, std::uint64_t)>;

// Assembles a Monte Carlo report from per-link estimates; term i draws
// from substream i of the master seed, and the report's standard error is
// the root-sum-square of the term errors.
InequalityReport mc_report(const LinkPprimeFn& link, InequalityId id,
                           std::string model, std::span<const Angle> angles) {
  InequalityReport r =
      base_report(id, std::move(model), EvalMode::monte_carlo, angles);
  const auto v = chain_settings(angles);
  double variance = 0.0;
  if (id == InequalityId::star) {
    const Term t0 = link(v[0], v[1], 0);
    const Term t1 = link(v[1], v[2], 1);
    const Term t2 = link(v[2], v[3], 2);
    const Term t3 = link(v[0], v[3], 3);
    r.lhs = t0.value + t1.value + t2.value;
    r.rhs = t3.value;
    variance = t0.se * t0.se + t1.se * t1.se + t2.se * t2.se + t3.se * t3.se;
  } else {
    const Term t0 = link(v[0], v[1], 0);
    const Term t1 = link(v[1], v[2], 1);
    const Term t2 = link(v[0], v[2], 2);  // agreement term P = 1 - P'
    r.lhs = t0.value + t1.value + (1.0 - t2.value);
    r.rhs = 1.0;
    variance = t0.se * t0.se + t1.se * t1.se + t2.se * t2.se;
  }
  r.standard_error = std::sqrt(variance);
  r.slack = r.lhs - r.rhs;
  r.verdict = r.slack >= -kMcVerdictSigmas * *r.standard_error
                  ? Verdict::satisfied
                  : Verdict::violated;
  return r;
}

}  // namespace

InequalityReport eval_star(const ProbabilityFn& pprime, const Angle& t1,
                           const Angle& t2, const Angle& t3) {
  const std::array<Angle, 3> angles{t1, t2, t3};
  return closed_form_star(pprime, angles, "closed-form");
}

InequalityReport eval_doublestar(const ProbabilityFn& pprime,
                                 const ProbabilityFn& psame, const Angle& t1,
                                 const Angle& t2) {
  const std::array<Angle, 2> angles{t1, t2};
  return closed_form_doublestar(pprime, psame, angles, "closed-form");
}

InequalityReport check_model(const LhvModel& model, InequalityId inequality,
                             std::span<const Angle> angles, EvalMode mode,
                             std::uint64_t samples, std::uint64_t seed,
                             unsigned workers) {
  validate_angles(inequality, angles);
  if (mode == EvalMode::exact) {
    if (!model.has_exact_grid())
      throw ModeError("model '" + model.id() +
                      "' supports Monte Carlo evaluation only");
    return model_exact(model, inequality, angles);
  }
  const LinkPprimeFn link = [&model, samples, seed, workers](
                                const MeasurementSetting& x,
                                const MeasurementSetting& y,
                                std::uint64_t term_index) {
    return model_mc_pprime(model, x, y, samples,
                           substream_seed(seed, term_index), workers);
  };
  return mc_report(link, inequality, model.id(), angles);
}

InequalityReport check_model(const std::string& model_id,
                             InequalityId inequality,
                             std::span<const Angle> angles, EvalMode mode,
                             std::uint64_t samples, std::uint64_t seed,
                             unsigned workers) {
  if (model_id == "qm") {
    validate_angles(inequality, angles);
    if (mode == EvalMode::exact) {
      if (inequality == InequalityId::star)
        return closed_form_star([](double t) { return p_prime(t); }, angles,
                                "qm");
      return closed_form_doublestar([](double t) { return p_prime(t); },
                                    [](double t) { return p_same(t); }, angles,
                                    "qm");
    }
    const LinkPprimeFn link = [samples, seed, workers](
                                  const MeasurementSetting& x,
                                  const MeasurementSetting& y,
                                  std::uint64_t term_index) {
      return qm_mc_pprime(x, y, samples, substream_seed(seed, term_index),
                          workers);
    };
    return mc_report(link, inequality, "qm", angles);
  }
  if (model_id == "tube4" || model_id == "richer-tube") {
    const std::unique_ptr<LhvModel> model = make_stripe_model(model_id);
    return check_model(*model, inequality, angles, mode, samples, seed,
                       workers);
  }
  throw ArgumentError("unknown model '" + model_id +
                      "'; expected qm, tube4, or richer-tube");
}

}  // namespace eprb
