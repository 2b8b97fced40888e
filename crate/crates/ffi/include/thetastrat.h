#ifndef THETASTRAT_H
#define THETASTRAT_H

/* Generated by cbindgen from crates/ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ThetaStatus {
  THETA_STATUS_OK = 0,
  THETA_STATUS_MATH_FAILURE = 1,
  THETA_STATUS_INDETERMINATE = 2,
  THETA_STATUS_INPUT_ERROR = 3,
  THETA_STATUS_NULL_POINTER = 4,
  THETA_STATUS_PANIC = 5,
} ThetaStatus;

typedef enum ThetaVerdict {
  THETA_VERDICT_VERIFIED = 0,
  THETA_VERDICT_MISMATCH = 1,
  THETA_VERDICT_INDETERMINATE = 2,
} ThetaVerdict;

/**
 * Opaque model handle.
 */
typedef struct ThetaModel ThetaModel;

/**
 * Flattened localization report. `*_known` is 0 when the term is unavailable.
 */
typedef struct ThetaLocalizationSummary {
  int64_t lhs;
  uint8_t lhs_known;
  int64_t semistable;
  uint8_t semistable_known;
  int64_t correction_sum;
  uint8_t corrections_known;
  size_t n_strata;
  int32_t verdict;
} ThetaLocalizationSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses and validates a model. On success `*out` owns a handle to be
 * released with [`theta_model_free`].
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum ThetaStatus theta_model_from_json(const char *json, struct ThetaModel **out);

/**
 * # Safety
 * `model` must come from [`theta_model_from_json`] and not be freed twice.
 */
void theta_model_free(struct ThetaModel *model);

/**
 * Writes the stratification as a JSON string to `*out`.
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum ThetaStatus theta_stratify_json(const struct ThetaModel *model, char **out);

/**
 * Runs the localization check for `sheaf_json` (the structure sheaf when
 * null) and fills `*out`. The return status reflects errors only; the
 * verdict is in the summary.
 *
 * # Safety
 * `model` must be a live handle; `sheaf_json` null or NUL-terminated;
 * `out` writable.
 */
enum ThetaStatus theta_verify_localization(const struct ThetaModel *model,
                                           const char *sheaf_json,
                                           uint32_t degree_bound,
                                           struct ThetaLocalizationSummary *out);

/**
 * Message of the last failure on this thread; empty after a success.
 * Valid until the next library call on the same thread.
 */
const char *theta_last_error_message(void);

/**
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void theta_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* THETASTRAT_H */
