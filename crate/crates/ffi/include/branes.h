#ifndef BRANES_H
#define BRANES_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BranesStatus {
  BRANES_STATUS_OK = 0,
  /**
   * Only from [`branes_report_status`]: some check failed.
   */
  BRANES_STATUS_CHECK_FAILED = 1,
  BRANES_STATUS_INVALID_INPUT = 2,
  BRANES_STATUS_RESOURCE_CAP = 3,
  BRANES_STATUS_PRECONDITION = 4,
  BRANES_STATUS_NOT_IN_UNIVERSE = 5,
  BRANES_STATUS_INCOMPLETE = 6,
  BRANES_STATUS_NULL_ARGUMENT = 7,
  BRANES_STATUS_UTF8 = 8,
  BRANES_STATUS_PANIC = 9,
} BranesStatus;

/**
 * The report of one scenario run.
 */
typedef struct BranesReport BranesReport;

/**
 * A parsed scenario.
 */
typedef struct BranesScenario BranesScenario;

/**
 * Overrides for [`branes_run`]. Zero fields keep the scenario's value.
 */
typedef struct BranesRunOptions {
  bool has_seed;
  uint64_t seed;
  size_t max_dim;
  size_t carrier_cap;
  size_t quad_panels;
  double tolerance;
  bool timings;
} BranesRunOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *branes_last_error(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void branes_string_free(char *s);

/**
 * Library version as a static string.
 */
const char *branes_version(void);

/**
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum BranesStatus branes_scenario_from_json(const char *json, struct BranesScenario **out);

/**
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum BranesStatus branes_scenario_load(const char *path, struct BranesScenario **out);

/**
 * # Safety
 * `s` must come from a scenario constructor and not have been freed.
 */
void branes_scenario_free(struct BranesScenario *s);

/**
 * Runs every check of the scenario. Check failures still return
 * `BRANES_STATUS_OK`; inspect the report for them.
 *
 * # Safety
 * `scenario` must be a live handle, `options` null or readable, `out`
 * writable.
 */
enum BranesStatus branes_run(const struct BranesScenario *scenario,
                             const struct BranesRunOptions *options,
                             struct BranesReport **out);

/**
 * # Safety
 * `r` must come from [`branes_run`] and not have been freed.
 */
void branes_report_free(struct BranesReport *r);

/**
 * The CLI exit status of the run: 0 all pass, 1 a check failed, 2 or 3 a
 * check could not be asked.
 *
 * # Safety
 * `r` must be a live report handle.
 */
int32_t branes_report_exit_code(const struct BranesReport *r);

/**
 * The run's overall outcome as a status code.
 *
 * # Safety
 * `r` must be a live report handle.
 */
enum BranesStatus branes_report_status(const struct BranesReport *r);

/**
 * Number of checks in the report.
 *
 * # Safety
 * `r` must be a live report handle.
 */
size_t branes_report_len(const struct BranesReport *r);

/**
 * The report as JSON, or null on failure.
 *
 * # Safety
 * `r` must be a live report handle.
 */
char *branes_report_json(const struct BranesReport *r);

/**
 * The report as aligned text lines.
 *
 * # Safety
 * `r` must be a live report handle.
 */
char *branes_report_text(const struct BranesReport *r);

/**
 * JSON schema of the scenario and state-table formats.
 */
char *branes_schema_json(void);

/**
 * Shannon entropy in bits of the Boltzmann distribution on `n` states.
 *
 * # Safety
 * `energies` must point to `n` doubles; `bits` must be writable.
 */
enum BranesStatus branes_sharp_entropy(const double *energies, size_t n, double beta, double *bits);

/**
 * Fuzzy entropy in bits with `panels` Gauss-Legendre panels (0 keeps the
 * default). `residual`, if non-null, receives the normalization residual.
 *
 * # Safety
 * `energies` must point to `n` doubles; `bits` must be writable; `residual`
 * null or writable.
 */
enum BranesStatus branes_fuzzy_entropy(const double *energies,
                                       size_t n,
                                       double beta,
                                       size_t panels,
                                       double *bits,
                                       double *residual);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BRANES_H */
