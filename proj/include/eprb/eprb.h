#ifndef EPRB_H
#define EPRB_H

/* Singlet-pair statistics, striped-tube local models, and the star /
 * doublestar disagreement inequalities, behind a flat C surface.
 *
 * Every fallible function returns an eprb_status and writes results
 * through out-pointers.  On failure the out-values are untouched and
 * eprb_last_error_message() (thread-local) describes the cause.  Angles
 * are radians; an eprb_angle additionally carries the exact fraction
 * theta/pi when one is known, which exact-mode evaluation relies on.
 */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum eprb_status {
  EPRB_OK = 0,
  EPRB_ERR_ARGUMENT = 1,    /* malformed or out-of-range input */
  EPRB_ERR_DOMAIN = 2,      /* input outside a mathematical domain */
  EPRB_ERR_BOUNDARY = 3,    /* height within tolerance of a stripe edge */
  EPRB_ERR_CONSUMED = 4,    /* single-use object measured twice */
  EPRB_ERR_ANY_ALL = 5,     /* measurement budget of a pair exceeded */
  EPRB_ERR_MODE = 6,        /* operation unavailable in this mode */
  EPRB_ERR_CONSISTENCY = 7, /* supplied values fail a required identity */
  EPRB_ERR_INTERNAL = 8     /* unexpected failure */
} eprb_status;

const char* eprb_status_name(eprb_status status);
const char* eprb_last_error_message(void);
const char* eprb_version(void);

/* ---- angles ---------------------------------------------------------- */

typedef struct eprb_angle {
  double radians;
  int has_pi_fraction; /* nonzero when radians == (pi_num/pi_den) * pi */
  int64_t pi_num;
  int64_t pi_den;
} eprb_angle;

eprb_status eprb_angle_from_radians(double radians, eprb_angle* out);
eprb_status eprb_angle_from_pi_fraction(int64_t num, int64_t den,
                                        eprb_angle* out);
/* Accepts decimal radians and symbolic fractions of pi such as "pi/4",
 * "-3pi/8" or "0.5pi"; integer coefficients of pi parse exactly. */
eprb_status eprb_angle_parse(const char* text, eprb_angle* out);
/* theta reduced modulo 2*pi into [0, 2*pi). */
eprb_status eprb_canonicalize(double theta, double* out);
/* Unsigned separation of two directions, in [0, pi]. */
eprb_status eprb_angle_between(eprb_angle a, eprb_angle b, eprb_angle* out);

/* ---- closed-form singlet statistics ---------------------------------- */

/* P(theta) = (1 + cos theta)/2: the partner's outcome reproduces its
 * prepared value.  P'(theta) = 1 - P(theta).  Correlation -cos theta. */
eprb_status eprb_p_same(double theta, double* out);
eprb_status eprb_p_prime(double theta, double* out);
eprb_status eprb_correlation_qm(double theta, double* out);
/* Joint law of the raw outcome pair, order (+,+), (+,-), (-,+), (-,-). */
eprb_status eprb_joint(double theta, double out_probs[4]);
/* The value the partner is prepared in after `measured` is observed. */
eprb_status eprb_partner_value(int measured, int* out);

/* ---- seeded singlet sampler ------------------------------------------ */

typedef struct eprb_sampler eprb_sampler;

eprb_status eprb_sampler_new(eprb_angle a, eprb_angle b, uint64_t seed,
                             eprb_sampler** out);
eprb_status eprb_sampler_next(eprb_sampler* sampler, int* out_first,
                              int* out_second);
/* Draws n pairs, adding tallies in the order (+,+), (+,-), (-,+), (-,-). */
eprb_status eprb_sampler_tally(eprb_sampler* sampler, uint64_t n,
                               uint64_t out_counts[4]);
void eprb_sampler_free(eprb_sampler* sampler);

/* ---- striped tube ----------------------------------------------------- */

/* k-value of a ball at height alpha on canonical face 1..4 (shifts 0, 1/4,
 * 1/2, 3/4).  Heights within 1e-12 of a stripe edge are rejected. */
eprb_status eprb_tube_face_value(int face_index, double alpha, int* out);
/* Exact average k-value product over uniform heights: 1 - 2|Z_i - Z_j|,
 * returned as a double plus the exact fraction out_num/out_den. */
eprb_status eprb_tube_correlation_exact(int face_i, int face_j, double* out,
                                        int64_t* out_num, int64_t* out_den);
eprb_status eprb_tube_correlation_mc(int face_i, int face_j, uint64_t samples,
                                     uint64_t seed, uint32_t workers,
                                     double* out_estimate,
                                     double* out_standard_error);
/* Disagreement theta/pi of the continuum tube, for theta in [0, pi]. */
eprb_status eprb_richer_tube_disagreement(double theta, double* out);

/* ---- oval ball -------------------------------------------------------- */

typedef struct eprb_oval eprb_oval;

/* A ball measurable exactly once; its value is deterministic in
 * (beta, face) but reachable only by the destructive measurement. */
eprb_status eprb_oval_new(double beta, eprb_oval** out);
eprb_status eprb_oval_measure(eprb_oval* ball, int face_index, int* out);
void eprb_oval_free(eprb_oval* ball);

/* ---- measurement ledger ------------------------------------------------ */

typedef struct eprb_ledger eprb_ledger;

eprb_status eprb_ledger_new(int inference_enabled, eprb_ledger** out);
/* First direct measurement of (pair, side in {1,2}); outcome is +1/-1. */
eprb_status eprb_ledger_record(eprb_ledger* ledger, uint64_t pair_id, int side,
                               eprb_angle setting, int outcome);
/* Partner's value along the vector measured on from_side: the negation of
 * the recorded outcome.  Costs the pair's single inference. */
eprb_status eprb_ledger_infer(eprb_ledger* ledger, uint64_t pair_id,
                              int from_side, eprb_angle setting, int* out);
eprb_status eprb_ledger_direct_count(const eprb_ledger* ledger,
                                     uint64_t pair_id, int side, int* out);
eprb_status eprb_ledger_value_count(const eprb_ledger* ledger,
                                    uint64_t pair_id, int* out);
void eprb_ledger_free(eprb_ledger* ledger);

/* ---- inequality reports ------------------------------------------------ */

typedef struct eprb_report {
  char inequality[16]; /* "star" or "doublestar" */
  char model[32];      /* "qm", "tube4", "richer-tube" */
  char mode[16];       /* "exact" or "mc" */
  double angles[3];
  int n_angles;
  double lhs;
  double rhs;
  double slack; /* lhs - rhs; negative slack is a violation */
  double standard_error;
  int has_standard_error; /* nonzero for Monte Carlo evaluations */
  int violated;
} eprb_report;

/* Evaluates `inequality` ("star": 3 angles, "doublestar": 2) on `model`
 * in `mode` ("exact" or "mc").  samples/seed/workers apply to mc mode. */
eprb_status eprb_bell_check(const char* inequality, const char* model,
                            const eprb_angle* angles, int n_angles,
                            const char* mode, uint64_t samples, uint64_t seed,
                            uint32_t workers, eprb_report* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* EPRB_H */
