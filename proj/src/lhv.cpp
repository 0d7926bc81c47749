#include "lhv.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

namespace eprb {

std::vector<WeightedHidden> LhvModel::exact_grid(
    std::span<const MeasurementSetting>) const {
  throw ModeError("model '" + id() + "' does not provide an exact decomposition");
}

namespace {

constexpr int kMaxBoundaryRetries = 128;

int side_index(Side side) { return side == Side::one ? 0 : 1; }

Side other_side(Side side) { return side == Side::one ? Side::two : Side::one; }

// Counts samples on which the two responses differ.  A stripe-edge hit is
// an excluded hidden state: it is redrawn, like the ambiguous balls that
// never leave the source.
std::uint64_t count_chunk(const LhvModel& model, const MeasurementSetting& a,
                          const MeasurementSetting& b, std::uint64_t n,
                          std::uint64_t seed) {
  Rng rng(seed);
  std::uint64_t differ = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    int retries = 0;
    for (;;) {
      const HiddenState hidden = model.sample_hidden(rng);
      try {
        const Outcome r1 = model.respond(Side::one, a, hidden);
        const Outcome r2 = model.respond(Side::two, b, hidden);
        if (r1 != r2) ++differ;
        break;
      } catch (const BoundaryError&) {
        if (++retries > kMaxBoundaryRetries) throw;
      }
    }
  }
  return differ;
}

std::uint64_t count_disagreements(const LhvModel& model,
                                  const MeasurementSetting& a,
                                  const MeasurementSetting& b, std::uint64_t n,
                                  std::uint64_t seed, unsigned workers) {
  return chunked_count(n, seed, workers,
                       [&model, &a, &b](std::uint64_t chunk_n,
                                        std::uint64_t chunk_seed) {
                         return count_chunk(model, a, b, chunk_n, chunk_seed);
                       });
}

}  // namespace

std::uint64_t chunked_count(
    std::uint64_t n, std::uint64_t seed, unsigned workers,
    const std::function<std::uint64_t(std::uint64_t, std::uint64_t)>& count) {
  if (n == 0) throw ArgumentError("sample count must be at least 1");
  if (workers == 0) throw ArgumentError("worker count must be at least 1");

  const std::uint64_t w = std::min<std::uint64_t>(workers, n);
  if (w == 1) return count(n, substream_seed(seed, 0));

  std::vector<std::uint64_t> counts(w, 0);
  std::vector<std::exception_ptr> errors(w);
  std::vector<std::thread> threads;
  threads.reserve(w);
  const std::uint64_t base = n / w;
  const std::uint64_t extra = n % w;
  for (std::uint64_t i = 0; i < w; ++i) {
    const std::uint64_t chunk = base + (i < extra ? 1 : 0);
    threads.emplace_back([&counts, &errors, &count, seed, i, chunk] {
      try {
        counts[i] = count(chunk, substream_seed(seed, i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::uint64_t total = 0;
  for (std::uint64_t c : counts) total += c;
  return total;
}

Estimate estimate_correlation(const LhvModel& model,
                              const MeasurementSetting& a,
                              const MeasurementSetting& b, std::uint64_t n,
                              std::uint64_t seed, unsigned workers) {
  const std::uint64_t differ = count_disagreements(model, a, b, n, seed, workers);
  const double est = 1.0 - 2.0 * (static_cast<double>(differ) / static_cast<double>(n));
  const double se = std::sqrt((1.0 - est * est) / static_cast<double>(n));
  return Estimate{est, se};
}

Estimate estimate_disagreement(const LhvModel& model,
                               const MeasurementSetting& a,
                               const MeasurementSetting& b, std::uint64_t n,
                               std::uint64_t seed, unsigned workers) {
  const std::uint64_t differ = count_disagreements(model, a, b, n, seed, workers);
  const double est = static_cast<double>(differ) / static_cast<double>(n);
  const double se = std::sqrt(est * (1.0 - est) / static_cast<double>(n));
  return Estimate{est, se};
}

Rational enumerate_exact(const LhvModel& model, const MeasurementSetting& a,
                         const MeasurementSetting& b) {
  const MeasurementSetting settings[2] = {a, b};
  const std::vector<WeightedHidden> grid = model.exact_grid(settings);
  if (grid.empty()) throw ConsistencyError("exact grid is empty");

  Rational total(0);
  Rational sum(0);
  for (const WeightedHidden& cell : grid) {
    if (cell.weight.is_negative() || cell.weight.is_zero())
      throw ConsistencyError("exact grid weights must be positive");
    total += cell.weight;
    const int product = model.respond(Side::one, a, cell.state).value() *
                        model.respond(Side::two, b, cell.state).value();
    sum += cell.weight * Rational(product);
  }
  if (total != Rational(1))
    throw ConsistencyError("exact grid weights must sum to 1, got " +
                           total.str());
  return sum;
}

Rational exact_disagreement(const LhvModel& model, const MeasurementSetting& a,
                            const MeasurementSetting& b) {
  return (Rational(1) - enumerate_exact(model, a, b)) / Rational(2);
}

bool MeasurementLedger::same_vector(const MeasurementSetting& a,
                                    const MeasurementSetting& b) {
  if (a.pi_units() && b.pi_units()) return *a.pi_units() == *b.pi_units();
  return std::fabs(a.radians() - b.radians()) <= 1e-12;
}

const MeasurementLedger::PairRecord* MeasurementLedger::find(
    std::uint64_t pair_id) const {
  const auto it = pairs_.find(pair_id);
  return it == pairs_.end() ? nullptr : &it->second;
}

void MeasurementLedger::record_measurement(std::uint64_t pair_id, Side side,
                                           const MeasurementSetting& setting,
                                           Outcome outcome) {
  PairRecord& rec = pairs_[pair_id];
  Slot& slot = rec.side[side_index(side)];
  if (slot.occupied) {
    if (slot.direct)
      throw AnyAllViolation(
          "side already measured directly; one direct measurement per side");
    throw AnyAllViolation(
        "side already holds an inferred value; the pair's budget is spent");
  }
  slot.occupied = true;
  slot.direct = true;
  slot.setting = setting;
  slot.outcome = outcome;
}

Outcome MeasurementLedger::infer_partner_value(std::uint64_t pair_id,
                                               Side from_side,
                                               const MeasurementSetting& setting) {
  if (!inference_enabled_)
    throw ModeError("inference is disabled for this ledger");

  const auto it = pairs_.find(pair_id);
  const Slot* src =
      it == pairs_.end() ? nullptr : &it->second.side[side_index(from_side)];
  if (src == nullptr || !src->occupied || !src->direct)
    throw ArgumentError("no direct measurement on that side to infer from");
  if (!same_vector(src->setting, setting))
    throw ArgumentError("inference is valid only along the measured vector");

  PairRecord& rec = it->second;
  if (rec.inference_used)
    throw AnyAllViolation("the pair's single inference is already spent");
  Slot& dst = rec.side[side_index(other_side(from_side))];
  if (dst.occupied)
    throw AnyAllViolation(
        "partner side already holds a value; at most 2 values per pair");

  dst.occupied = true;
  dst.direct = false;
  dst.setting = setting;
  dst.outcome = -src->outcome;
  rec.inference_used = true;
  return dst.outcome;
}

int MeasurementLedger::direct_count(std::uint64_t pair_id, Side side) const {
  const PairRecord* rec = find(pair_id);
  if (rec == nullptr) return 0;
  const Slot& slot = rec->side[side_index(side)];
  return slot.occupied && slot.direct ? 1 : 0;
}

int MeasurementLedger::value_count(std::uint64_t pair_id) const {
  const PairRecord* rec = find(pair_id);
  if (rec == nullptr) return 0;
  return (rec->side[0].occupied ? 1 : 0) + (rec->side[1].occupied ? 1 : 0);
}

}  // namespace eprb
