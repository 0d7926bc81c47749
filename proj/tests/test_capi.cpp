// The public C surface: status discipline, out-parameter hygiene, and the
// behavior of every exported handle type.  Deliberately includes only the
// installed header, never the C++ internals.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>

#include "doctest.h"
#include "eprb/eprb.h"

namespace {
const double kPi = 3.14159265358979323846;

eprb_angle pi_fraction(int64_t num, int64_t den) {
  eprb_angle a;
  REQUIRE(eprb_angle_from_pi_fraction(num, den, &a) == EPRB_OK);
  return a;
}
}  // namespace

TEST_CASE("status names and version strings exist") {
  CHECK(std::string(eprb_status_name(EPRB_OK)) == "ok");
  CHECK(std::string(eprb_status_name(EPRB_ERR_ARGUMENT)) == "argument");
  CHECK(std::string(eprb_status_name(EPRB_ERR_BOUNDARY)) == "boundary");
  CHECK(std::string(eprb_status_name(EPRB_ERR_ANY_ALL)) == "any-all");
  CHECK(std::string(eprb_status_name(EPRB_ERR_CONSUMED)) == "consumed");
  CHECK(eprb_version() != nullptr);
}

TEST_CASE("angles parse, build, and canonicalize through the C surface") {
  eprb_angle a;
  CHECK(eprb_angle_parse("pi/4", &a) == EPRB_OK);
  CHECK(a.has_pi_fraction);
  CHECK(a.pi_num == 1);
  CHECK(a.pi_den == 4);
  CHECK(a.radians == doctest::Approx(kPi / 4).epsilon(1e-15));

  CHECK(eprb_angle_parse("0.5", &a) == EPRB_OK);
  CHECK_FALSE(a.has_pi_fraction);
  CHECK(a.radians == 0.5);

  CHECK(eprb_angle_parse("nonsense", &a) == EPRB_ERR_ARGUMENT);
  CHECK(std::strlen(eprb_last_error_message()) > 0);
  CHECK(eprb_angle_parse(nullptr, &a) == EPRB_ERR_ARGUMENT);
  CHECK(eprb_angle_parse("pi/4", nullptr) == EPRB_ERR_ARGUMENT);

  CHECK(eprb_angle_from_radians(1.25, &a) == EPRB_OK);
  CHECK(a.radians == 1.25);
  CHECK(eprb_angle_from_radians(INFINITY, &a) == EPRB_ERR_DOMAIN);
  CHECK(eprb_angle_from_pi_fraction(1, 0, &a) == EPRB_ERR_ARGUMENT);

  double canonical = 0.0;
  CHECK(eprb_canonicalize(-kPi / 2, &canonical) == EPRB_OK);
  CHECK(canonical == doctest::Approx(3 * kPi / 2).epsilon(1e-15));

  eprb_angle sep;
  CHECK(eprb_angle_between(pi_fraction(7, 4), pi_fraction(1, 4), &sep) ==
        EPRB_OK);
  CHECK(sep.has_pi_fraction);
  CHECK(sep.pi_num == 1);
  CHECK(sep.pi_den == 2);
}

TEST_CASE("closed-form singlet statistics cross the C boundary intact") {
  double value = -1.0;
  CHECK(eprb_p_same(kPi / 3, &value) == EPRB_OK);
  CHECK(value == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(eprb_p_prime(kPi / 3, &value) == EPRB_OK);
  CHECK(value == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(eprb_correlation_qm(kPi / 3, &value) == EPRB_OK);
  CHECK(value == doctest::Approx(-0.5).epsilon(1e-15));

  // failed calls leave the out-value untouched
  double sentinel = 42.0;
  CHECK(eprb_p_same(NAN, &sentinel) == EPRB_ERR_DOMAIN);
  CHECK(sentinel == 42.0);
  CHECK(eprb_p_same(0.0, nullptr) == EPRB_ERR_ARGUMENT);

  double probs[4];
  CHECK(eprb_joint(kPi / 3, probs) == EPRB_OK);
  CHECK(probs[0] == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(probs[1] == doctest::Approx(0.375).epsilon(1e-14));
  CHECK(probs[2] == doctest::Approx(0.375).epsilon(1e-14));
  CHECK(probs[3] == doctest::Approx(0.125).epsilon(1e-14));

  int partner = 0;
  CHECK(eprb_partner_value(1, &partner) == EPRB_OK);
  CHECK(partner == -1);
  CHECK(eprb_partner_value(-1, &partner) == EPRB_OK);
  CHECK(partner == 1);
  CHECK(eprb_partner_value(0, &partner) == EPRB_ERR_ARGUMENT);
}

TEST_CASE("samplers draw reproducible anti-correlated streams") {
  eprb_sampler* sampler = nullptr;
  REQUIRE(eprb_sampler_new(pi_fraction(0, 1), pi_fraction(0, 1), 9,
                           &sampler) == EPRB_OK);
  for (int i = 0; i < 200; ++i) {
    int e1 = 0;
    int e2 = 0;
    CHECK(eprb_sampler_next(sampler, &e1, &e2) == EPRB_OK);
    CHECK(e2 == -e1);
  }
  eprb_sampler_free(sampler);

  uint64_t t1[4] = {0, 0, 0, 0};
  uint64_t t2[4] = {0, 0, 0, 0};
  eprb_sampler* s1 = nullptr;
  eprb_sampler* s2 = nullptr;
  REQUIRE(eprb_sampler_new(pi_fraction(0, 1), pi_fraction(1, 3), 77, &s1) ==
          EPRB_OK);
  REQUIRE(eprb_sampler_new(pi_fraction(0, 1), pi_fraction(1, 3), 77, &s2) ==
          EPRB_OK);
  CHECK(eprb_sampler_tally(s1, 50000, t1) == EPRB_OK);
  CHECK(eprb_sampler_tally(s2, 50000, t2) == EPRB_OK);
  eprb_sampler_free(s1);
  eprb_sampler_free(s2);
  CHECK(t1[0] + t1[1] + t1[2] + t1[3] == 50000);
  for (int i = 0; i < 4; ++i) CHECK(t1[i] == t2[i]);

  CHECK(eprb_sampler_new(pi_fraction(0, 1), pi_fraction(0, 1), 1, nullptr) ==
        EPRB_ERR_ARGUMENT);
  eprb_sampler_free(nullptr);  // freeing nothing is a no-op
}

TEST_CASE("tube faces report stripe values and exact correlations") {
  int value = 0;
  CHECK(eprb_tube_face_value(1, 0.5, &value) == EPRB_OK);
  CHECK(value == 1);
  CHECK(eprb_tube_face_value(3, 0.3, &value) == EPRB_OK);
  CHECK(value == -1);
  CHECK(eprb_tube_face_value(2, 0.25, &value) == EPRB_ERR_BOUNDARY);
  CHECK(eprb_tube_face_value(0, 0.5, &value) == EPRB_ERR_ARGUMENT);
  CHECK(eprb_tube_face_value(5, 0.5, &value) == EPRB_ERR_ARGUMENT);

  double corr = 0.0;
  int64_t num = 0;
  int64_t den = 0;
  CHECK(eprb_tube_correlation_exact(1, 2, &corr, &num, &den) == EPRB_OK);
  CHECK(corr == 0.5);
  CHECK(num == 1);
  CHECK(den == 2);
  CHECK(eprb_tube_correlation_exact(1, 3, &corr, &num, &den) == EPRB_OK);
  CHECK(corr == 0.0);
  CHECK(num == 0);
  CHECK(eprb_tube_correlation_exact(1, 4, &corr, &num, &den) == EPRB_OK);
  CHECK(corr == -0.5);
  CHECK(num == -1);
  CHECK(den == 2);
  CHECK(eprb_tube_correlation_exact(1, 1, &corr, &num, &den) == EPRB_OK);
  CHECK(corr == 1.0);

  double estimate = 0.0;
  double standard_error = 0.0;
  CHECK(eprb_tube_correlation_mc(1, 2, 100000, 5, 2, &estimate,
                                 &standard_error) == EPRB_OK);
  CHECK(std::abs(estimate - 0.5) < 4 * standard_error);
  double estimate_again = 0.0;
  double se_again = 0.0;
  CHECK(eprb_tube_correlation_mc(1, 2, 100000, 5, 2, &estimate_again,
                                 &se_again) == EPRB_OK);
  CHECK(estimate == estimate_again);

  double d = 0.0;
  CHECK(eprb_richer_tube_disagreement(kPi / 2, &d) == EPRB_OK);
  CHECK(d == 0.5);
  CHECK(eprb_richer_tube_disagreement(-0.5, &d) == EPRB_ERR_DOMAIN);
}

TEST_CASE("oval balls are single-use through the C surface") {
  eprb_oval* ball = nullptr;
  REQUIRE(eprb_oval_new(0.42, &ball) == EPRB_OK);
  int first = 0;
  CHECK(eprb_oval_measure(ball, 2, &first) == EPRB_OK);
  CHECK((first == 1 || first == -1));
  int second = 0;
  CHECK(eprb_oval_measure(ball, 2, &second) == EPRB_ERR_CONSUMED);
  CHECK(eprb_oval_measure(ball, 1, &second) == EPRB_ERR_CONSUMED);
  eprb_oval_free(ball);

  // deterministic in (height, face) across fresh balls
  eprb_oval* again = nullptr;
  REQUIRE(eprb_oval_new(0.42, &again) == EPRB_OK);
  int repeat = 0;
  CHECK(eprb_oval_measure(again, 2, &repeat) == EPRB_OK);
  CHECK(repeat == first);
  eprb_oval_free(again);

  CHECK(eprb_oval_new(NAN, &ball) == EPRB_ERR_ARGUMENT);
  eprb_oval_free(nullptr);
}

TEST_CASE("the ledger's budgets surface as distinct statuses") {
  eprb_ledger* ledger = nullptr;
  REQUIRE(eprb_ledger_new(1, &ledger) == EPRB_OK);
  const eprb_angle a = pi_fraction(1, 4);
  const eprb_angle b = pi_fraction(1, 2);

  CHECK(eprb_ledger_record(ledger, 7, 1, a, 1) == EPRB_OK);
  CHECK(eprb_ledger_record(ledger, 7, 1, a, 1) == EPRB_ERR_ANY_ALL);
  CHECK(eprb_ledger_record(ledger, 7, 3, a, 1) == EPRB_ERR_ARGUMENT);
  CHECK(eprb_ledger_record(ledger, 7, 2, a, 0) == EPRB_ERR_ARGUMENT);

  int direct = -1;
  CHECK(eprb_ledger_direct_count(ledger, 7, 1, &direct) == EPRB_OK);
  CHECK(direct == 1);
  int values = -1;
  CHECK(eprb_ledger_value_count(ledger, 7, &values) == EPRB_OK);
  CHECK(values == 1);

  int inferred = 0;
  CHECK(eprb_ledger_infer(ledger, 7, 1, b, &inferred) == EPRB_ERR_ARGUMENT);
  CHECK(eprb_ledger_infer(ledger, 7, 2, a, &inferred) == EPRB_ERR_ARGUMENT);
  CHECK(eprb_ledger_infer(ledger, 7, 1, a, &inferred) == EPRB_OK);
  CHECK(inferred == -1);
  CHECK(eprb_ledger_infer(ledger, 7, 1, a, &inferred) == EPRB_ERR_ANY_ALL);
  CHECK(eprb_ledger_value_count(ledger, 7, &values) == EPRB_OK);
  CHECK(values == 2);
  CHECK(eprb_ledger_record(ledger, 7, 2, b, -1) == EPRB_ERR_ANY_ALL);

  eprb_ledger_free(ledger);

  eprb_ledger* disabled = nullptr;
  REQUIRE(eprb_ledger_new(0, &disabled) == EPRB_OK);
  CHECK(eprb_ledger_record(disabled, 1, 1, a, 1) == EPRB_OK);
  int out = 0;
  CHECK(eprb_ledger_infer(disabled, 1, 1, a, &out) == EPRB_ERR_MODE);
  eprb_ledger_free(disabled);
  eprb_ledger_free(nullptr);
}

TEST_CASE("bell checks fill the report struct faithfully") {
  const eprb_angle quarter = pi_fraction(1, 4);
  const eprb_angle star_angles[3] = {quarter, quarter, quarter};

  eprb_report report;
  std::memset(&report, 0xAA, sizeof(report));
  REQUIRE(eprb_bell_check("star", "qm", star_angles, 3, "exact", 0, 1, 1,
                          &report) == EPRB_OK);
  CHECK(std::string(report.inequality) == "star");
  CHECK(std::string(report.model) == "qm");
  CHECK(std::string(report.mode) == "exact");
  CHECK(report.n_angles == 3);
  CHECK(report.angles[0] == doctest::Approx(kPi / 4).epsilon(1e-15));
  CHECK(report.slack ==
        doctest::Approx(1.0 - std::sqrt(2.0)).epsilon(1e-14));
  CHECK(report.violated == 1);
  CHECK(report.has_standard_error == 0);

  const eprb_angle ds_angles[2] = {quarter, quarter};
  REQUIRE(eprb_bell_check("doublestar", "tube4", ds_angles, 2, "exact", 0, 1,
                          1, &report) == EPRB_OK);
  CHECK(std::string(report.inequality) == "doublestar");
  CHECK(report.n_angles == 2);
  CHECK(report.slack == 0.0);
  CHECK(report.violated == 0);

  REQUIRE(eprb_bell_check("star", "richer-tube", star_angles, 3, "mc", 50000,
                          11, 2, &report) == EPRB_OK);
  CHECK(report.has_standard_error == 1);
  CHECK(report.standard_error > 0.0);
  CHECK(std::abs(report.slack) < 4 * report.standard_error);

  // the error ladder: names, counts, then the angle-sum domain
  CHECK(eprb_bell_check("triangle", "qm", star_angles, 3, "exact", 0, 1, 1,
                        &report) == EPRB_ERR_ARGUMENT);
  CHECK(eprb_bell_check("star", "qm", star_angles, 2, "exact", 0, 1, 1,
                        &report) == EPRB_ERR_ARGUMENT);
  CHECK(eprb_bell_check("star", "qm", nullptr, 3, "exact", 0, 1, 1, &report) ==
        EPRB_ERR_ARGUMENT);
  const eprb_angle heavy[3] = {pi_fraction(1, 2), pi_fraction(1, 2),
                               pi_fraction(1, 2)};
  CHECK(eprb_bell_check("star", "qm", heavy, 3, "exact", 0, 1, 1, &report) ==
        EPRB_ERR_DOMAIN);
  CHECK(eprb_bell_check("star", "richer-tube", star_angles, 3, "turbo", 0, 1,
                        1, &report) == EPRB_ERR_ARGUMENT);

  // a failing call leaves the previous report intact
  eprb_report untouched;
  std::memset(&untouched, 0x5C, sizeof(untouched));
  eprb_report probe = untouched;
  CHECK(eprb_bell_check("star", "qm", heavy, 3, "exact", 0, 1, 1, &probe) ==
        EPRB_ERR_DOMAIN);
  CHECK(std::memcmp(&probe, &untouched, sizeof(probe)) == 0);
}
