/* C interface to the coco coherent-configuration toolkit. */

#ifndef COCO_H
#define COCO_H

/* Generated by cbindgen from the coco-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call in this interface.
 */
typedef enum {
  /**
   * The call succeeded.
   */
  COCO_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  COCO_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  COCO_STATUS_UTF8_ERROR = 2,
  /**
   * The input was malformed: bad JSON, axiom violations, unknown
   * generator family, or out-of-range parameters.
   */
  COCO_STATUS_INVALID_INPUT = 3,
  /**
   * The configuration is coherent but some diagonal block algebra is
   * not commutative, so no matrix-unit decomposition exists.
   */
  COCO_STATUS_NOT_FIBER_COMMUTATIVE = 4,
  /**
   * Numerical analysis failed to converge or to meet its residual
   * gates.
   */
  COCO_STATUS_NUMERICAL_ERROR = 5,
  /**
   * An internal panic was caught at the boundary.
   */
  COCO_STATUS_PANIC = 6,
} CocoStatus;

/**
 * An owned, structurally validated coherent configuration.
 */
typedef struct CocoConfig CocoConfig;

/**
 * Tuning knobs shared by every analysis call.
 */
typedef struct {
  /**
   * Seed for probe matrices and gauge choices; reports are
   * deterministic given a seed.
   */
  uint64_t seed;
  /**
   * Eigenvalue convergence tolerance.
   */
  double tol_eig;
  /**
   * Positive-semidefiniteness tolerance.
   */
  double tol_psd;
  /**
   * Numeric-rank tolerance.
   */
  double tol_rank;
  /**
   * Integrality tolerance for multiplicities.
   */
  double tol_int;
} CocoOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Returns the default options: seed 42 and the library's standard
 * tolerances.
 */
CocoOptions coco_options_default(void);

/**
 * Pointer to a description of the most recent error on this thread.
 * Valid until the next failing call on the same thread; never null.
 */
const char *coco_last_error(void);

/**
 * Parses a configuration from JSON (`{"fibers": [...], "colors":
 * [[...]], "labels": [...]}`) and performs structural validation.
 *
 * # Safety
 * `json` must be a valid nul-terminated string and `out` a valid
 * location for one pointer. On success `*out` owns the configuration
 * and must be released with `coco_config_free`.
 */
CocoStatus coco_config_parse(const char *json, CocoConfig **out);

/**
 * Builds a bundled example configuration: `gq-w2`, `gq-grid`,
 * `gq-dualgrid`, `cyclic`, or `hamming-2-2`. Pass a negative `param`
 * for families that take no parameter.
 *
 * # Safety
 * `family` must be a valid nul-terminated string and `out` a valid
 * location for one pointer. On success `*out` owns the configuration
 * and must be released with `coco_config_free`.
 */
CocoStatus coco_config_generate(const char *family, int64_t param, CocoConfig **out);

/**
 * Releases a configuration handle. Null is ignored.
 *
 * # Safety
 * `cfg` must be null or a pointer returned by `coco_config_parse` or
 * `coco_config_generate` that has not been freed.
 */
void coco_config_free(CocoConfig *cfg);

/**
 * Number of points, or 0 for a null handle.
 *
 * # Safety
 * `cfg` must be null or a live configuration handle.
 */
size_t coco_config_points(const CocoConfig *cfg);

/**
 * Number of colors, or 0 for a null handle.
 *
 * # Safety
 * `cfg` must be null or a live configuration handle.
 */
size_t coco_config_rank(const CocoConfig *cfg);

/**
 * Number of fibers, or 0 for a null handle.
 *
 * # Safety
 * `cfg` must be null or a live configuration handle.
 */
size_t coco_config_fiber_count(const CocoConfig *cfg);

/**
 * Checks the coherent-configuration axioms exhaustively and writes a
 * JSON report (`{meta, validation, verdict}`). Axiom failures still
 * return `Ok`; the verdict field carries the outcome.
 *
 * # Safety
 * `cfg` must be a live configuration handle and `out_json` a valid
 * location for one pointer. On success `*out_json` must be released
 * with `coco_string_free`.
 */
CocoStatus coco_validate(const CocoConfig *cfg, CocoOptions opts, char **out_json);

/**
 * Runs the full pipeline (validation, matrix-unit decomposition, Krein
 * matrices, feasibility tests) and writes the standard JSON report.
 * Mathematical infeasibility is reported inside the JSON verdict, not
 * as an error status.
 *
 * # Safety
 * `cfg` must be a live configuration handle and `out_json` a valid
 * location for one pointer. On success `*out_json` must be released
 * with `coco_string_free`.
 */
CocoStatus coco_analyze(const CocoConfig *cfg, CocoOptions opts, char **out_json);

/**
 * Screens a generalized-quadrangle order (s, t) against the closed-form
 * Krein matrices and writes the verdict as JSON (`{s, t, verdict,
 * witness, checks}`).
 *
 * # Safety
 * `out_json` must be a valid location for one pointer. On success
 * `*out_json` must be released with `coco_string_free`.
 */
CocoStatus coco_gq_feasibility(uint64_t s, uint64_t t, char **out_json);

/**
 * Releases a string returned by this interface. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string pointer produced by this interface that
 * has not been freed.
 */
void coco_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COCO_H */
