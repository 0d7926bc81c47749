#pragma once
// Evaluators for the two disagreement inequalities.
//
// With P'(theta) the probability that values along vectors separated by
// theta disagree, every deterministic local assignment obeys
//     (star)        P'(t1) + P'(t2) + P'(t3) >= P'(t1 + t2 + t3)
//     (doublestar)  P'(t1) + P'(t2) + P(t1 + t2) >= 1,  P = 1 - P'
// for t_i >= 0 with sum at most pi, because disagreement of binary values
// is a metric: along the coplanar chain v0, v1 = v0 + t1, v2 = v1 + t2,
// v3 = v2 + t3, a disagreement between the ends forces a disagreement on
// some link.  The quantum P'(theta) = (1 - cos theta)/2 breaks both, with
// the largest deficit 1 - sqrt(2) at t_i = pi/4.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "lhv.hpp"
#include "rational.hpp"

namespace eprb {

enum class InequalityId { star, doublestar };
enum class EvalMode { exact, monte_carlo };
enum class Verdict { satisfied, violated };

const char* to_string(InequalityId id);
const char* to_string(EvalMode mode);
const char* to_string(Verdict verdict);
InequalityId parse_inequality(const std::string& text);
EvalMode parse_eval_mode(const std::string& text);

// A satisfied verdict means slack >= -tolerance: 1e-12 for exact
// evaluations, 4 standard errors for Monte Carlo ones.
inline constexpr double kExactVerdictTolerance = 1e-12;
inline constexpr double kMcVerdictSigmas = 4.0;

struct InequalityReport {
  InequalityId inequality = InequalityId::star;
  std::string model;
  EvalMode mode = EvalMode::exact;
  std::vector<double> angles;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // lhs - rhs; negative slack is a violation
  Verdict verdict = Verdict::satisfied;
  std::optional<double> standard_error;  // Monte Carlo only
  std::optional<Rational> slack_exact;   // set when the evaluation was rational
};

using ProbabilityFn = std::function<double(double)>;

// Evaluates (star) for a closed-form disagreement function.
// Angles must be nonnegative with t1 + t2 + t3 <= pi.
InequalityReport eval_star(const ProbabilityFn& pprime, const Angle& t1,
                           const Angle& t2, const Angle& t3);

// Evaluates (doublestar); the agreement function must satisfy
// P(x) + P'(x) = 1 within 1e-9 at every probed angle.
InequalityReport eval_doublestar(const ProbabilityFn& pprime,
                                 const ProbabilityFn& psame, const Angle& t1,
                                 const Angle& t2);

// Evaluates an inequality on a local model by measuring the disagreement
// of every chain link (exactly from the model's grid, or by seeded
// sampling with the standard error of each term combined root-sum-square).
InequalityReport check_model(const LhvModel& model, InequalityId inequality,
                             std::span<const Angle> angles, EvalMode mode,
                             std::uint64_t samples, std::uint64_t seed,
                             unsigned workers = 1);

// Same, selecting a built-in model by name: "qm" (closed forms or the
// singlet sampler), "tube4", or "richer-tube".
InequalityReport check_model(const std::string& model_id,
                             InequalityId inequality,
                             std::span<const Angle> angles, EvalMode mode,
                             std::uint64_t samples, std::uint64_t seed,
                             unsigned workers = 1);

}  // namespace eprb
