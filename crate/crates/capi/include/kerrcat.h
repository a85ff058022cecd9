#ifndef KERRCAT_H
#define KERRCAT_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Measurement outcome selector for the single-photon scheme.
 */
typedef enum KcOutcome {
  KC_OUTCOME_H = 0,
  KC_OUTCOME_V = 1,
} KcOutcome;

/**
 * Detector-pattern selector for the twin-photon scheme.
 */
typedef enum KcPattern {
  KC_PATTERN_ONE_DETECTOR = 0,
  KC_PATTERN_BOTH_DETECTORS = 1,
} KcPattern;

/**
 * Status codes returned by every fallible function.
 */
typedef enum KcStatus {
  /**
   * Success.
   */
  KC_OK = 0,
  /**
   * Internal failure.
   */
  KC_ERR_INTERNAL = 1,
  /**
   * Invalid argument (bad literal, null pointer, unknown enum value).
   */
  KC_ERR_INVALID_ARGUMENT = 2,
  /**
   * The requested post-selection has probability zero.
   */
  KC_ERR_IMPOSSIBLE_OUTCOME = 3,
} KcStatus;

/**
 * Opaque protocol-result handle.
 */
typedef struct KcProtocolResult KcProtocolResult;

/**
 * Complex number as a plain (re, im) pair.
 */
typedef struct KcComplex {
  double re;
  double im;
} KcComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Run the single-photon scheme. On success `*out` owns a new handle that
 * must be released with `kc_result_free`.
 *
 * # Safety
 * `out` must be null or valid for writing one pointer.
 */
enum KcStatus kc_protocol1_run(double alpha_re,
                               double alpha_im,
                               double phi,
                               enum KcOutcome outcome,
                               struct KcProtocolResult **out);

/**
 * Run the twin-photon scheme; same ownership contract as
 * `kc_protocol1_run`.
 *
 * # Safety
 * `out` must be null or valid for writing one pointer.
 */
enum KcStatus kc_protocol2_run(double alpha_re,
                               double alpha_im,
                               double phi,
                               enum KcPattern pattern,
                               struct KcProtocolResult **out);

/**
 * Release a protocol-result handle. Null is ignored.
 *
 * # Safety
 * `handle` must be null or a pointer previously returned by a run function,
 * not yet freed.
 */
void kc_result_free(struct KcProtocolResult *handle);

/**
 * Born probability of the post-selected record. Returns NaN on null.
 *
 * # Safety
 * `handle` must be null or a live handle from a run function.
 */
double kc_result_outcome_prob(const struct KcProtocolResult *handle);

/**
 * Exact cat amplitude `alpha (1 - e^{i phi}) / sqrt2`.
 *
 * # Safety
 * `handle` must be null or a live handle from a run function.
 */
struct KcComplex kc_result_cat_amplitude_exact(const struct KcProtocolResult *handle);

/**
 * Small-phi cat amplitude `-i alpha phi / sqrt2`.
 *
 * # Safety
 * `handle` must be null or a live handle from a run function.
 */
struct KcComplex kc_result_cat_amplitude_approx(const struct KcProtocolResult *handle);

/**
 * Wigner function of the generated `o2` cat at phase-space point
 * `beta = beta_re + i beta_im`.
 *
 * # Safety
 * `handle` must be null or a live handle; `out` null or writable.
 */
enum KcStatus kc_result_wigner(const struct KcProtocolResult *handle,
                               double beta_re,
                               double beta_im,
                               double *out);

/**
 * Serialize the full result document to a NUL-terminated JSON string.
 * Free it with `kc_string_free`.
 *
 * # Safety
 * `handle` must be null or a live handle from a run function.
 */
char *kc_result_to_json(const struct KcProtocolResult *handle);

/**
 * Release a string produced by this library. Null is ignored.
 *
 * # Safety
 * `text` must be null or a string returned by this library, not yet freed.
 */
void kc_string_free(char *text);

/**
 * Wigner function of the cat `N (|gamma> + parity |-gamma>)` at `beta`.
 * `parity` is +1 (even) or -1 (odd).
 *
 * # Safety
 * `out` must be null or valid for writing one f64.
 */
enum KcStatus kc_cat_wigner(double gamma_re,
                            double gamma_im,
                            int32_t parity,
                            double beta_re,
                            double beta_im,
                            double *out);

/**
 * Fidelity of the asymmetric-Kerr output against the ideal cat.
 *
 * # Safety
 * `out` must be null or valid for writing one f64.
 */
enum KcStatus kc_imperfect_fidelity(double alpha_re,
                                    double alpha_im,
                                    double phi,
                                    double epsilon,
                                    double *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* KERRCAT_H */
