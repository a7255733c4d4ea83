#ifndef TSTWR_H
#define TSTWR_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TstwrMethod {
  TSTWR_METHOD_ALTERNATING = 0,
  TSTWR_METHOD_GRID = 1,
  TSTWR_METHOD_EXACT_THETA = 2,
} TstwrMethod;

/**
 * Result code of every fallible call.
 */
typedef enum TstwrStatus {
  TSTWR_STATUS_OK = 0,
  TSTWR_STATUS_NULL_POINTER = 1,
  TSTWR_STATUS_INVALID_ARGUMENT = 2,
  TSTWR_STATUS_DOMAIN = 3,
  TSTWR_STATUS_CONVERGENCE = 4,
  TSTWR_STATUS_VALIDATION = 5,
  TSTWR_STATUS_IO = 6,
  TSTWR_STATUS_OUT_OF_RANGE = 7,
  TSTWR_STATUS_PANIC = 8,
} TstwrStatus;

/**
 * Channel gains plus system parameters.
 */
typedef struct TstwrConfig TstwrConfig;

/**
 * Rows of a completed sweep.
 */
typedef struct TstwrSweep TstwrSweep;

typedef struct TstwrOptimum {
  double theta_star;
  double omega_star;
  double r_sum;
  size_t iterations;
  bool converged;
} TstwrOptimum;

typedef struct TstwrSweepSpec {
  double h1;
  double beta_db_min;
  double beta_db_max;
  size_t beta_steps;
  double ptot_dbw_min;
  double ptot_dbw_max;
  size_t ptot_steps;
  double eta;
} TstwrSweepSpec;

typedef struct TstwrSweepRow {
  double beta_db;
  double ptot_dbw;
  double eta;
  double theta_star;
  double omega_star;
  double r_sum_ts;
  double r_sum_non_eh;
  double gain_ts_vs_non_eh;
  bool converged;
} TstwrSweepRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *tstwr_status_message(enum TstwrStatus status);

/**
 * Detail of the most recent failure on this thread; empty after a
 * success. Valid until the next call on the same thread.
 */
const char *tstwr_last_error(void);

/**
 * Creates a configuration with unit block time, base-2 logarithms and
 * the default stopping tolerance.
 *
 * # Safety
 * `out` must be null or valid for writing one pointer.
 */
enum TstwrStatus tstwr_config_new(double h1,
                                  double h2,
                                  double p_tot,
                                  double eta,
                                  struct TstwrConfig **out);

/**
 * # Safety
 * `config` must be null or a live handle from [`tstwr_config_new`].
 */
enum TstwrStatus tstwr_config_set_epsilon(struct TstwrConfig *config, double epsilon);

/**
 * Releases a configuration; null is ignored.
 *
 * # Safety
 * `config` must be null or a live handle not used afterwards.
 */
void tstwr_config_free(struct TstwrConfig *config);

/**
 * Equal-rate sum rate at `(theta, omega)`, both strictly inside (0, 1).
 *
 * # Safety
 * `config` must be a live handle, `out` valid for writing.
 */
enum TstwrStatus tstwr_fair_sum_rate(const struct TstwrConfig *config,
                                     double theta,
                                     double omega,
                                     double *out);

/**
 * Jointly optimizes `(θ, ω)`; `grid_n` is the nodes per axis used by
 * [`TstwrMethod::Grid`] and ignored otherwise.
 *
 * # Safety
 * `config` must be a live handle, `out` valid for writing.
 */
enum TstwrStatus tstwr_optimize(const struct TstwrConfig *config,
                                enum TstwrMethod method,
                                size_t grid_n,
                                struct TstwrOptimum *out);

/**
 * Maximum sum rate of the non-harvesting benchmark.
 *
 * # Safety
 * `config` must be a live handle, `out` valid for writing.
 */
enum TstwrStatus tstwr_non_eh_msr(const struct TstwrConfig *config, double *out);

/**
 * Principal-branch Lambert W for `x ≥ −1/e`.
 *
 * # Safety
 * `out` must be valid for writing.
 */
enum TstwrStatus tstwr_lambert_w0(double x, double *out);

/**
 * The default 21 x 21 grid over β and P_tot in [−10, 10] with
 * `H1 = 1` and `η = 1`.
 */
struct TstwrSweepSpec tstwr_sweep_spec_default(void);

/**
 * Runs a sweep, rows ordered β-major.
 *
 * # Safety
 * `spec` must be readable and `out` valid for writing one pointer.
 */
enum TstwrStatus tstwr_sweep_run(const struct TstwrSweepSpec *spec,
                                 enum TstwrMethod method,
                                 size_t grid_n,
                                 struct TstwrSweep **out);

/**
 * Number of rows; 0 for null.
 *
 * # Safety
 * `sweep` must be null or a live handle.
 */
size_t tstwr_sweep_len(const struct TstwrSweep *sweep);

/**
 * # Safety
 * `sweep` must be a live handle, `out` valid for writing.
 */
enum TstwrStatus tstwr_sweep_row(const struct TstwrSweep *sweep,
                                 size_t index,
                                 struct TstwrSweepRow *out);

/**
 * Writes the sweep as CSV to a UTF-8 path.
 *
 * # Safety
 * `sweep` must be a live handle, `path` a NUL-terminated string.
 */
enum TstwrStatus tstwr_sweep_write_csv(const struct TstwrSweep *sweep, const char *path);

/**
 * Releases a sweep; null is ignored.
 *
 * # Safety
 * `sweep` must be null or a live handle not used afterwards.
 */
void tstwr_sweep_free(struct TstwrSweep *sweep);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TSTWR_H */
