#ifndef QDOM_H
#define QDOM_H

/* Generated by cbindgen from the qdom-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of a fallible call.
 */
typedef enum QdomStatus {
  /**
   * The call succeeded.
   */
  QDOM_STATUS_OK = 0,
  /**
   * A null pointer, bad index, or otherwise unusable argument.
   */
  QDOM_STATUS_INVALID_ARGUMENT = 1,
  /**
   * The input text failed to parse or validate.
   */
  QDOM_STATUS_PARSE_ERROR = 2,
  /**
   * The space does not satisfy the operation's hypothesis.
   */
  QDOM_STATUS_UNSUPPORTED = 3,
  /**
   * The space exceeds an enumeration cap.
   */
  QDOM_STATUS_SIZE_BOUND = 4,
  /**
   * An internal invariant failed; please report.
   */
  QDOM_STATUS_INTERNAL = 5,
} QdomStatus;

/**
 * An immutable distance space (opaque).
 */
typedef struct QdomSpace QdomSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The library version as an allocated string; release with
 * [`qdom_string_free`].
 */
char *qdom_version(void);

/**
 * The last error message on this thread, or null if the last call
 * succeeded. The caller owns the returned string.
 */
char *qdom_last_error_message(void);

/**
 * Releases a string returned by this library. Null is a no-op.
 *
 * # Safety
 * `s` must have been returned by a `qdom_*` call and not yet freed.
 */
void qdom_string_free(char *s);

/**
 * Releases a space handle. Null is a no-op.
 *
 * # Safety
 * `space` must have been returned by a `qdom_space_*` constructor and not
 * yet freed.
 */
void qdom_space_free(struct QdomSpace *space);

/**
 * Parses a space file (JSON or the `dist p q 1/2` line format), validating
 * the triangle inequality, and writes a new handle to `out`.
 *
 * # Safety
 * `text` must point to a NUL-terminated string and `out` to a writable
 * pointer slot.
 */
enum QdomStatus qdom_space_parse(const char *text, struct QdomSpace **out);

/**
 * Builds a named catalog space (formula entries yield their default finite
 * slice) and writes a new handle to `out`.
 *
 * # Safety
 * `name` must point to a NUL-terminated string and `out` to a writable
 * pointer slot.
 */
enum QdomStatus qdom_space_from_catalog(const char *name, struct QdomSpace **out);

/**
 * Draws a seeded random triangle-closed space. `profile` is one of
 * "generic", "hemimetric", "quasimetric", "characteristic-relation".
 *
 * # Safety
 * `profile` must point to a NUL-terminated string and `out` to a writable
 * pointer slot.
 */
enum QdomStatus qdom_space_random(size_t points,
                                  uint64_t seed,
                                  const char *profile,
                                  struct QdomSpace **out);

/**
 * The number of points, or 0 when `space` is null.
 *
 * # Safety
 * `space` must be a live handle or null.
 */
size_t qdom_space_point_count(const struct QdomSpace *space);

/**
 * Writes the label of point `index` to `out`.
 *
 * # Safety
 * `space` must be a live handle and `out` a writable pointer slot.
 */
enum QdomStatus qdom_space_label(const struct QdomSpace *space, size_t index, char **out);

/**
 * Writes the exact distance `d(x, y)` to `out` as a value string
 * ("a/b", "a", or "inf").
 *
 * # Safety
 * `space` must be a live handle and `out` a writable pointer slot.
 */
enum QdomStatus qdom_space_distance(const struct QdomSpace *space, size_t x, size_t y, char **out);

/**
 * Writes the space as a JSON space file to `out`.
 *
 * # Safety
 * `space` must be a live handle and `out` a writable pointer slot.
 */
enum QdomStatus qdom_space_to_json(const struct QdomSpace *space, char **out);

/**
 * Writes the upper-hemimetric space of `space` to `out`.
 *
 * # Safety
 * `space` must be a live handle and `out` a writable pointer slot.
 */
enum QdomStatus qdom_space_upper_hemimetric(const struct QdomSpace *space, struct QdomSpace **out);

/**
 * Writes the lower-hemimetric space of `space` to `out`.
 *
 * # Safety
 * `space` must be a live handle and `out` a writable pointer slot.
 */
enum QdomStatus qdom_space_lower_hemimetric(const struct QdomSpace *space, struct QdomSpace **out);

/**
 * Writes the relational (ideal) completion of `space` to `out`: one point
 * per ideal under the reverse Hausdorff distance. Fails with `Unsupported`
 * when the space is not max-continuous.
 *
 * # Safety
 * `space` must be a live handle and `out` a writable pointer slot.
 */
enum QdomStatus qdom_space_relational_completion(const struct QdomSpace *space,
                                                 struct QdomSpace **out);

/**
 * Writes the Smyth completion of `space` to `out`: zero-aperture ideals
 * under the reverse ideal-Hausdorff distance. Fails with `Unsupported`
 * when the space is not Smyth-continuous.
 *
 * # Safety
 * `space` must be a live handle and `out` a writable pointer slot.
 */
enum QdomStatus qdom_space_smyth_completion(const struct QdomSpace *space, struct QdomSpace **out);

/**
 * Runs the full check battery on `space`, writing the JSON report to
 * `out_report` and (when non-null) whether any check failed to
 * `out_failed`.
 *
 * # Safety
 * `space` must be a live handle, `out_report` a writable pointer slot, and
 * `out_failed` writable or null.
 */
enum QdomStatus qdom_space_check(const struct QdomSpace *space,
                                 char **out_report,
                                 bool *out_failed);

/**
 * Runs the named catalog suite, writing the JSON report to `out_report`
 * and (when non-null) whether any check failed to `out_failed`.
 *
 * # Safety
 * `out_report` must be a writable pointer slot and `out_failed` writable
 * or null.
 */
enum QdomStatus qdom_named_suite(char **out_report, bool *out_failed);

/**
 * Runs a seeded random suite over all profiles with point counts in
 * `[size_lo, size_hi]`, writing the JSON report to `out_report` and (when
 * non-null) whether any check failed to `out_failed`.
 *
 * # Safety
 * `out_report` must be a writable pointer slot and `out_failed` writable
 * or null.
 */
enum QdomStatus qdom_random_suite(size_t n_spaces,
                                  size_t size_lo,
                                  size_t size_hi,
                                  uint64_t seed,
                                  char **out_report,
                                  bool *out_failed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QDOM_H */
