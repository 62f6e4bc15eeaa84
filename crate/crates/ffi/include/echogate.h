#ifndef ECHOGATE_H
#define ECHOGATE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum EgProtocol {
  EG_PROTOCOL_SPIN_ECHO = 0,
  EG_PROTOCOL_TRADITIONAL = 1,
} EgProtocol;

typedef enum EgRegime {
  EG_REGIME_DRESSING = 0,
  EG_REGIME_NEAR_RESONANT = 1,
} EgRegime;

typedef enum EgStatus {
  EG_STATUS_OK = 0,
  EG_STATUS_NULL_POINTER = 1,
  EG_STATUS_INVALID_ARGUMENT = 2,
  EG_STATUS_NUMERIC_FAILURE = 3,
  EG_STATUS_PANIC = 4,
} EgStatus;

/**
 * An error-budget setup with its sampling plan.
 */
typedef struct EgBudget EgBudget;

/**
 * A built pulse sequence.
 */
typedef struct EgGate EgGate;

/**
 * Gate inputs; C6 in 2π·THz·μm⁶, frequencies in 2π·MHz, times in μs.
 * `eta3 <= 0` means "same as eta".
 */
typedef struct EgGateParams {
  double c6_rc_r0;
  double c6_rc_r1;
  double spacing_um;
  double eta;
  double eta3;
  double omega_c_mhz;
  double phi;
  double t_gap_us;
  double phi2;
  double phi3;
  uint32_t wait_branch;
} EgGateParams;

/**
 * Frequencies in MHz (X/2π), durations in μs.
 */
typedef struct EgDerived {
  double v0_mhz;
  double v1_mhz;
  double v_plus_mhz;
  double omega_c_mhz;
  double omega_t2_mhz;
  double omega_t3_mhz;
  double omega_t4_mhz;
  double kappa;
  double t_wait_us;
  double durations_us[5];
  double eps1;
  double eps2;
} EgDerived;

/**
 * Row-major 4×4 gate on |00⟩, |01⟩, |10⟩, |11⟩.
 */
typedef struct EgGateResult {
  double re[16];
  double im[16];
  double fidelity;
  double frobenius_distance;
  double channel_errors[4];
  double leakage[4];
  double max_norm_drift;
} EgGateResult;

typedef struct EgErrorReport {
  double ta_k;
  double e_de;
  double e_ro;
  double e_do;
  double total;
  double sigma_l_um;
  double v_z_um_per_us;
  bool harmonic_ok;
} EgErrorReport;

typedef struct EgEchoSummary {
  double final_time_us;
  double residual;
  double magnetization_initial;
  double magnetization_final;
  double population_one_initial;
  double population_one_final;
} EgEchoSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *eg_last_error_message(void);

/**
 * Writes the default gate parameters.
 *
 * # Safety
 * `out` must be NULL or point to writable memory for one `EgGateParams`.
 */
enum EgStatus eg_gate_params_default(struct EgGateParams *out);

/**
 * # Safety
 * `params` must be NULL or point to a valid `EgGateParams`; `out` must be
 * NULL or point to writable memory for one `EgDerived`.
 */
enum EgStatus eg_derive(const struct EgGateParams *params, struct EgDerived *out);

/**
 * Builds a gate. On success `*out` owns a handle for [`eg_gate_free`].
 *
 * # Safety
 * `params` must be NULL or valid; `out` must be NULL or writable.
 */
enum EgStatus eg_gate_new(const struct EgGateParams *params,
                          enum EgProtocol protocol,
                          struct EgGate **out);

/**
 * # Safety
 * `gate` must be NULL or a handle from [`eg_gate_new`] not yet freed.
 */
void eg_gate_free(struct EgGate *gate);

/**
 * Simulates the four computational inputs at fixed spacing `spacing_um`
 * (pass a non-positive value for the configured spacing).
 *
 * # Safety
 * `gate` must be NULL or a live handle; `out` must be NULL or writable.
 */
enum EgStatus eg_gate_simulate(const struct EgGate *gate,
                               double spacing_um,
                               struct EgGateResult *out);

/**
 * Budget with default thermal, decay and Doppler models and `samples`
 * Monte Carlo spacings drawn from `seed`.
 *
 * # Safety
 * `params` must be NULL or valid; `out` must be NULL or writable.
 */
enum EgStatus eg_budget_new(const struct EgGateParams *params,
                            enum EgProtocol protocol,
                            size_t samples,
                            uint64_t seed,
                            struct EgBudget **out);

/**
 * # Safety
 * `budget` must be NULL or a handle from [`eg_budget_new`] not yet freed.
 */
void eg_budget_free(struct EgBudget *budget);

/**
 * Error budget at atom temperature `ta_k` (kelvin).
 *
 * # Safety
 * `budget` must be NULL or a live handle; `out` must be NULL or writable.
 */
enum EgStatus eg_budget_evaluate(const struct EgBudget *budget,
                                 double ta_k,
                                 struct EgErrorReport *out);

/**
 * Four-atom forward/swap/backward echo with the preset for `regime`.
 *
 * # Safety
 * `out` must be NULL or writable.
 */
enum EgStatus eg_manybody_echo(enum EgRegime regime, struct EgEchoSummary *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ECHOGATE_H */
