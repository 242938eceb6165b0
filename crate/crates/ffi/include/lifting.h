#ifndef LIFTING_H
#define LIFTING_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LiftingStatus {
  LIFTING_STATUS_OK = 0,
  LIFTING_STATUS_NULL_POINTER = 1,
  LIFTING_STATUS_INVALID_ARGUMENT = 2,
  LIFTING_STATUS_OUT_OF_RANGE = 3,
  LIFTING_STATUS_POLE = 4,
  LIFTING_STATUS_INTEGRATION_FAILURE = 5,
  LIFTING_STATUS_VALIDITY_VIOLATION = 6,
  LIFTING_STATUS_NON_FINITE = 7,
  LIFTING_STATUS_CONFIG_ERROR = 8,
  LIFTING_STATUS_PANIC = 9,
} LiftingStatus;

typedef enum LiftingPulseKind {
  LIFTING_PULSE_KIND_POWER_RISE = 0,
  LIFTING_PULSE_KIND_POWER_FALL = 1,
  LIFTING_PULSE_KIND_EXPONENTIAL_RISE = 2,
  LIFTING_PULSE_KIND_EXPONENTIAL_FALL = 3,
  LIFTING_PULSE_KIND_GAUSSIAN = 4,
  LIFTING_PULSE_KIND_SECH = 5,
  LIFTING_PULSE_KIND_TRIG_POWER = 6,
  LIFTING_PULSE_KIND_LINEAR_TRUNCATED = 7,
} LiftingPulseKind;

/**
 * Opaque scenario: one pulse and one parameter point.
 */
typedef struct LiftingScenario LiftingScenario;

/**
 * A complex number as two doubles.
 */
typedef struct LiftingComplex {
  double re;
  double im;
} LiftingComplex;

/**
 * SU(2) propagator [[u11, u12], [-conj(u12), conj(u11)]].
 */
typedef struct LiftingOperator {
  struct LiftingComplex u11;
  struct LiftingComplex u12;
} LiftingOperator;

/**
 * Amplitudes of the two states (adiabatic or bare, depending on the call).
 */
typedef struct LiftingAmplitudes {
  struct LiftingComplex minus;
  struct LiftingComplex plus;
} LiftingAmplitudes;

/**
 * Asymptotic lifting populations and phases.
 */
typedef struct LiftingLifting {
  double p_minus;
  double p_plus;
  double chi_minus;
  double chi_plus;
  double common_phase;
  /**
   * Nonzero when the formula was used outside its stated regime.
   */
  int32_t warning;
} LiftingLifting;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL after a
 * successful one. Valid until the next call on the same thread.
 */
const char *lifting_last_error(void);

/**
 * Creates a scenario. `n` is the power for power and trig pulses (ignored
 * otherwise). Free with [`lifting_scenario_free`].
 *
 * # Safety
 * `out` must be NULL or valid for writes.
 */
enum LiftingStatus lifting_scenario_new(enum LiftingPulseKind kind,
                                        uint32_t n,
                                        double t0_omega0,
                                        double t0_delta0,
                                        double tau_start,
                                        double tau_end,
                                        struct LiftingScenario **out);

/**
 * Releases a scenario; NULL is ignored.
 *
 * # Safety
 * `h` must be NULL or a handle from [`lifting_scenario_new`] that has not been freed.
 */
void lifting_scenario_free(struct LiftingScenario *h);

/**
 * Numerical propagator from `tau_a` to `tau_b`. `tol <= 0` selects the
 * default tolerance.
 *
 * # Safety
 * `h` must be NULL or a live scenario handle; `out` must be NULL or valid for writes.
 */
enum LiftingStatus lifting_propagate(const struct LiftingScenario *h,
                                     double tau_a,
                                     double tau_b,
                                     double tol,
                                     struct LiftingOperator *out);

/**
 * Adiabatic amplitudes (A-, A+) at `tau` after starting in |-> at the
 * start of the pulse support.
 *
 * # Safety
 * `h` must be NULL or a live scenario handle; `out` must be NULL or valid for writes.
 */
enum LiftingStatus lifting_adiabatic_amplitudes(const struct LiftingScenario *h,
                                                double tau,
                                                double tol,
                                                struct LiftingAmplitudes *out);

/**
 * Exact asymptotic lifting for linear rising at Landau-Zener parameter omega.
 *
 * # Safety
 * `out` must be NULL or valid for writes.
 */
enum LiftingStatus lifting_linear(double omega, struct LiftingLifting *out);

/**
 * Approximate lifting for power-law rising Omega0 tau^n.
 *
 * # Safety
 * `out` must be NULL or valid for writes.
 */
enum LiftingStatus lifting_universal(uint32_t n,
                                     double t0_delta0,
                                     double t0_omega0,
                                     struct LiftingLifting *out);

/**
 * Exact lifting for exponential rising: varpi = T0*Delta0, zeta the half
 * area reached, s_i the coupling area at the start.
 *
 * # Safety
 * `out` must be NULL or valid for writes.
 */
enum LiftingStatus lifting_exponential(double varpi,
                                       double zeta,
                                       double s_i,
                                       struct LiftingLifting *out);

/**
 * Bare amplitudes after a sech pulse (closed form).
 *
 * # Safety
 * `out` must be NULL or valid for writes.
 */
enum LiftingStatus lifting_rosen_zener(double t0_omega0,
                                       double t0_delta0,
                                       struct LiftingAmplitudes *out);

/**
 * Approximate bare amplitudes after Omega0 sin^n(tau) on [0, pi].
 *
 * # Safety
 * `out` must be NULL or valid for writes.
 */
enum LiftingStatus lifting_trig_lineshape(uint32_t n,
                                          double t0_omega0,
                                          double t0_delta0,
                                          struct LiftingAmplitudes *out);

/**
 * Principal log Gamma(z).
 *
 * # Safety
 * `out` must be NULL or valid for writes.
 */
enum LiftingStatus lifting_log_gamma(struct LiftingComplex z, struct LiftingComplex *out);

/**
 * Runs a TOML scenario and returns its JSON report in `*out`, to be
 * released with [`lifting_string_free`].
 *
 * # Safety
 * `config` must be NULL or a NUL-terminated string; `out` must be NULL or valid for writes.
 */
enum LiftingStatus lifting_run_scenario_json(const char *config, double tol, char **out);

/**
 * Releases a string returned by this library; NULL is ignored.
 *
 * # Safety
 * `s` must be NULL or a string returned by this library that has not been freed.
 */
void lifting_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LIFTING_H */
