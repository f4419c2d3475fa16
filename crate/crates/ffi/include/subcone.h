#ifndef SUBCONE_H
#define SUBCONE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SubconeOrder {
  SUBCONE_ORDER_LEX_MIN = 0,
  SUBCONE_ORDER_T_OPT = 1,
  SUBCONE_ORDER_RECURSIVE = 2,
  SUBCONE_ORDER_MAX_CUT = 3,
  SUBCONE_ORDER_MIN_CUT = 4,
} SubconeOrder;

typedef enum SubconeStatus {
  SUBCONE_STATUS_OK = 0,
  SUBCONE_STATUS_FAILURE = 1,
  SUBCONE_STATUS_BUDGET_EXHAUSTED = 2,
  SUBCONE_STATUS_MALFORMED = 3,
  SUBCONE_STATUS_OVERFLOW = 4,
} SubconeStatus;

/**
 * A list of rays of equal dimension.
 */
typedef struct SubconeRays SubconeRays;

/**
 * The inequality description of the cone for one base-set size.
 */
typedef struct SubconeSpec SubconeSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next call on the same thread.
 */
const char *subcone_last_error(void);

const char *subcone_version(void);

/**
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum SubconeStatus subcone_spec_new(size_t n, struct SubconeSpec **out);

/**
 * # Safety
 * `spec` must come from [`subcone_spec_new`] and not be used afterwards.
 */
void subcone_spec_free(struct SubconeSpec *spec);

/**
 * Number of coordinates; 0 for a null handle.
 *
 * # Safety
 * `spec` must be null or a live handle.
 */
size_t subcone_spec_dim(const struct SubconeSpec *spec);

/**
 * Number of inequalities; 0 for a null handle.
 *
 * # Safety
 * `spec` must be null or a live handle.
 */
size_t subcone_spec_rows(const struct SubconeSpec *spec);

/**
 * Copies row `row` of the inequality matrix into `out[0..len]`.
 *
 * # Safety
 * `out` must point to `len` writable integers.
 */
enum SubconeStatus subcone_spec_matrix_row(const struct SubconeSpec *spec,
                                           size_t row,
                                           int64_t *out,
                                           size_t len);

/**
 * Enumerates all extremal rays. `max_rays == 0` means no budget. On
 * `SUBCONE_STATUS_BUDGET_EXHAUSTED` `*out` still receives the partial
 * ray list of the last intermediate cone.
 *
 * # Safety
 * `spec` must be a live handle and `out` a valid handle slot.
 */
enum SubconeStatus subcone_enumerate(const struct SubconeSpec *spec,
                                     enum SubconeOrder order,
                                     uint64_t seed,
                                     size_t max_rays,
                                     struct SubconeRays **out);

/**
 * Orbit representatives of `rays`, sorted.
 *
 * # Safety
 * Both handles must be live and `out` a valid handle slot.
 */
enum SubconeStatus subcone_rays_orbits(struct SubconeSpec *spec,
                                       const struct SubconeRays *rays,
                                       struct SubconeRays **out);

/**
 * # Safety
 * `rays` must be null or a live handle.
 */
size_t subcone_rays_len(const struct SubconeRays *rays);

/**
 * # Safety
 * `rays` must be null or a live handle.
 */
size_t subcone_rays_dim(const struct SubconeRays *rays);

/**
 * Copies ray `index` into `out[0..len]`.
 *
 * # Safety
 * `out` must point to `len` writable integers.
 */
enum SubconeStatus subcone_rays_get(const struct SubconeRays *rays,
                                    size_t index,
                                    int64_t *out,
                                    size_t len);

/**
 * # Safety
 * `rays` must come from this library and not be used afterwards.
 */
void subcone_rays_free(struct SubconeRays *rays);

/**
 * Sets `*extremal` to whether `x` spans an extremal ray of the cone.
 *
 * # Safety
 * `x` must point to `len` integers and `extremal` be writable.
 */
enum SubconeStatus subcone_verify_extremal(const struct SubconeSpec *spec,
                                           const int64_t *x,
                                           size_t len,
                                           bool *extremal);

/**
 * Number of inequalities tight at `x`.
 *
 * # Safety
 * `x` must point to `len` integers and `weight` be writable.
 */
enum SubconeStatus subcone_weight(const struct SubconeSpec *spec,
                                  const int64_t *x,
                                  size_t len,
                                  size_t *weight);

/**
 * Writes the orbit representative of `x` to `out` and the orbit size to
 * `*orbit_size` (which may be null).
 *
 * # Safety
 * `x` and `out` must each point to `len` integers.
 */
enum SubconeStatus subcone_canonical_form(struct SubconeSpec *spec,
                                          const int64_t *x,
                                          size_t len,
                                          int64_t *out,
                                          size_t *orbit_size);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUBCONE_H */
