#ifndef THETACAT_H
#define THETACAT_H

/* Generated by cbindgen from crates/ffi; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result codes.
 */
typedef enum tc_status {
  TC_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  TC_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  TC_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed or inconsistent input.
   */
  TC_STATUS_INVALID = 3,
  /**
   * A completion stopped at its pass limit.
   */
  TC_STATUS_PASS_LIMIT = 4,
  /**
   * A size limit (elements or enumerated maps) was exceeded.
   */
  TC_STATUS_LIMIT = 5,
  /**
   * Any other failure, including a caught panic.
   */
  TC_STATUS_INTERNAL = 6,
} tc_status;

/**
 * A finite precategory over a bounded support.
 */
typedef struct tc_precat tc_precat;

/**
 * `F0 ⇉ F1` (and optionally `F2`) over a precat.
 */
typedef struct tc_resolution tc_resolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failed call on this thread, or "" if none.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *tc_last_error(void);

/**
 * Library version, a static string.
 */
const char *tc_version(void);

/**
 * Parse a category or precat document. Categories become nerves (promoted
 * when `n == 2`). `degree_bound == 0` picks the default (3 at n = 1, 2 at n = 2).
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out_precat` a valid pointer.
 */
enum tc_status tc_precat_from_json(const char *json,
                                   uint32_t n,
                                   uint32_t degree_bound,
                                   struct tc_precat **out_precat);

/**
 * The JSON text of a shipped fixture (`"arrow"`, `"retract"`, ...), or null.
 *
 * # Safety
 * `name` must be a NUL-terminated string or null.
 */
const char *tc_fixture(const char *name);

/**
 * # Safety
 * `p` must come from [`tc_precat_from_json`] and not be used afterwards.
 */
void tc_precat_free(struct tc_precat *p);

/**
 * Number of support shapes (levels) of the precat.
 *
 * # Safety
 * `p` must be a live handle.
 */
enum tc_status tc_precat_level_count(const struct tc_precat *p, size_t *out_count);

/**
 * Number of elements at level `level` (support order).
 *
 * # Safety
 * `p` must be a live handle.
 */
enum tc_status tc_precat_level_size(const struct tc_precat *p, size_t level, size_t *out_size);

/**
 * Segal check: `*out_is_category` is true when the precat is an n-category.
 *
 * # Safety
 * `p` must be a live handle.
 */
enum tc_status tc_precat_is_ncategory(const struct tc_precat *p, bool *out_is_category);

/**
 * Build the resolution of `p`. `pass_limit == 0` uses the default. Fails
 * with [`TcStatus::PassLimit`] if a stage does not reach a fixpoint.
 *
 * # Safety
 * `p` must be a live handle and `out_resolution` a valid pointer.
 */
enum tc_status tc_resolve(const struct tc_precat *p,
                          size_t pass_limit,
                          bool level2,
                          struct tc_resolution **out_resolution);

/**
 * # Safety
 * `r` must come from [`tc_resolve`] and not be used afterwards.
 */
void tc_resolution_free(struct tc_resolution *r);

/**
 * Cell counts of `F0` and `F1`.
 *
 * # Safety
 * `r` must be a live handle.
 */
enum tc_status tc_resolution_cells(const struct tc_resolution *r, size_t *out_f0, size_t *out_f1);

/**
 * Homotopy classes of maps from the resolved source into `target`.
 * Both must live over the same support.
 *
 * # Safety
 * `r` and `target` must be live handles.
 */
enum tc_status tc_hom_classes(const struct tc_resolution *r,
                              const struct tc_precat *target,
                              size_t *out_maps,
                              size_t *out_classes);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* THETACAT_H */
