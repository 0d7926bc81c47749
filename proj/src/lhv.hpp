#pragma once
// Local deterministic response models and their estimators.
//
// A model is a hidden-state distribution plus two per-side response
// functions.  respond(side, setting, hidden) never sees the other side's
// setting, so locality is structural, and the same arguments always give
// the same outcome, so responses are predetermined by the hidden state.
// Estimators reduce every statistic to counts over a seeded sample stream,
// or to an exact weighted enumeration when the model supplies a finite
// decomposition of its hidden-state space.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "geometry.hpp"
#include "rational.hpp"
#include "rng.hpp"

namespace eprb {

enum class Side { one = 1, two = 2 };

// How the two response streams form a pair:
//   same_object: both sides probe one object (a ball against two faces),
//                so equal settings agree.
//   eprb_pair:   side 2 is the color-inverted partner object,
//                so equal settings disagree, like the singlet.
enum class PairingConvention { same_object, eprb_pair };

struct HiddenState {
  double lambda = 0.0;
};

struct WeightedHidden {
  HiddenState state;
  Rational weight;
};

class LhvModel {
 public:
  virtual ~LhvModel() = default;

  virtual std::string id() const = 0;
  virtual PairingConvention pairing() const = 0;
  virtual HiddenState sample_hidden(Rng& rng) const = 0;
  virtual Outcome respond(Side side, const MeasurementSetting& setting,
                          const HiddenState& hidden) const = 0;

  // Finite decomposition of the hidden-state space into cells on which the
  // responses at every given setting are constant, with exact weights
  // summing to 1.  Models without one refuse with a mode error.
  virtual bool has_exact_grid() const { return false; }
  virtual std::vector<WeightedHidden> exact_grid(
      std::span<const MeasurementSetting> settings) const;
};

struct Estimate {
  double value = 0.0;
  double standard_error = 0.0;
};

// Correlation view of a disagreement probability: E = 1 - 2 d.
inline double correlation_from_disagreement(double d) { return 1.0 - 2.0 * d; }

// Splits n draws across workers, chunk i counting on substream i of the
// seed, and sums the per-chunk tallies.  Chunks run on their own threads
// when workers > 1; the total is a pure function of (n, seed, workers).
std::uint64_t chunked_count(
    std::uint64_t n, std::uint64_t seed, unsigned workers,
    const std::function<std::uint64_t(std::uint64_t chunk_n,
                                      std::uint64_t chunk_seed)>& count);

// Mean of respond(1,a,.) * respond(2,b,.) over n sampled hidden states;
// standard error sqrt((1 - est^2)/n).  Samples may be partitioned over
// parallel workers; the result is a pure function of (seed, workers).
Estimate estimate_correlation(const LhvModel& model,
                              const MeasurementSetting& a,
                              const MeasurementSetting& b, std::uint64_t n,
                              std::uint64_t seed, unsigned workers = 1);

// Fraction of sampled hidden states on which the two responses differ,
// i.e. respond(1,a,.) = -respond(2,b,.); binomial standard error.  On the
// same (seed, workers) stream, correlation = 1 - 2 * disagreement exactly.
Estimate estimate_disagreement(const LhvModel& model,
                               const MeasurementSetting& a,
                               const MeasurementSetting& b, std::uint64_t n,
                               std::uint64_t seed, unsigned workers = 1);

// Exact correlation: sum of weight * respond(1,a,.) * respond(2,b,.) over
// the model's exact grid for {a, b}.  The weights must sum to exactly 1.
Rational enumerate_exact(const LhvModel& model, const MeasurementSetting& a,
                         const MeasurementSetting& b);

// (1 - enumerate_exact)/2: exact probability that the responses differ.
Rational exact_disagreement(const LhvModel& model, const MeasurementSetting& a,
                            const MeasurementSetting& b);

// Bookkeeper for what one pair of particles can actually yield: each side
// carries at most one direct measurement, ever, and with inference enabled
// at most one extra value per pair may be derived from the partner's
// measurement along the same vector.  Total values per pair never exceed 2.
// Attempts to exceed a budget raise AnyAllViolation and leave no trace.
class MeasurementLedger {
 public:
  explicit MeasurementLedger(bool inference_enabled)
      : inference_enabled_(inference_enabled) {}

  bool inference_enabled() const { return inference_enabled_; }

  // First direct measurement on (pair, side); the observed outcome is
  // stored so the partner's value can later be derived from it.
  void record_measurement(std::uint64_t pair_id, Side side,
                          const MeasurementSetting& setting, Outcome outcome);

  // Negation of the outcome recorded on from_side, valid only along the
  // vector that was actually measured; fills the partner side's slot.
  Outcome infer_partner_value(std::uint64_t pair_id, Side from_side,
                              const MeasurementSetting& setting);

  // 1 when (pair, side) was directly measured.
  int direct_count(std::uint64_t pair_id, Side side) const;
  // Direct plus inferred values currently held by the pair, 0..2.
  int value_count(std::uint64_t pair_id) const;

 private:
  struct Slot {
    bool occupied = false;
    bool direct = false;
    MeasurementSetting setting;
    Outcome outcome;
  };
  struct PairRecord {
    Slot side[2];
    bool inference_used = false;
  };

  static bool same_vector(const MeasurementSetting& a,
                          const MeasurementSetting& b);

  const PairRecord* find(std::uint64_t pair_id) const;

  bool inference_enabled_;
  std::unordered_map<std::uint64_t, PairRecord> pairs_;
};

}  // namespace eprb
