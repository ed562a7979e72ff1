#ifndef QHC_H
#define QHC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QhcStatus {
  QHC_STATUS_OK = 0,
  QHC_STATUS_NULL_POINTER = 1,
  QHC_STATUS_INVALID_UTF8 = 2,
  QHC_STATUS_INVALID_ARGUMENT = 3,
  QHC_STATUS_COMPUTATION_FAILED = 4,
  QHC_STATUS_PANIC = 5,
} QhcStatus;

/**
 * Opaque Chern character.
 */
typedef struct QhcChernClass QhcChernClass;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call into the library on the same thread.
 */
const char *qhc_last_error(void);

/**
 * Single-layer Chern character. With `oracle` set the Berezin
 * pushforward is computed instead of the closed form.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum QhcStatus qhc_ch_single(int64_t b,
                             int64_t c,
                             int64_t d,
                             uint32_t g,
                             int64_t n,
                             int64_t m,
                             bool oracle,
                             struct QhcChernClass **out);

/**
 * Multilayer Chern character from a JSON configuration
 * `{"K": [[..]], "C": [[..]], "n": [..], "m": [..], "d": [..], "g": int}`.
 *
 * # Safety
 * `config_json` must be a NUL-terminated string and `out` valid for writes.
 */
enum QhcStatus qhc_ch_multilayer(const char *config_json, bool oracle, struct QhcChernClass **out);

/**
 * Exact equality of two classes.
 *
 * # Safety
 * Both handles must come from this library; `out` must be valid for writes.
 */
enum QhcStatus qhc_chern_equal(const struct QhcChernClass *a,
                               const struct QhcChernClass *b,
                               bool *out);

/**
 * JSON rendering of the class; free with `qhc_string_free`.
 *
 * # Safety
 * `class` must come from this library; `out` must be valid for writes.
 */
enum QhcStatus qhc_chern_to_json(const struct QhcChernClass *class_, char **out);

/**
 * Human-readable rendering; free with `qhc_string_free`.
 *
 * # Safety
 * `class` must come from this library; `out` must be valid for writes.
 */
enum QhcStatus qhc_chern_to_string(const struct QhcChernClass *class_, char **out);

/**
 * # Safety
 * `class` must come from this library and not be used afterwards.
 */
void qhc_chern_free(struct QhcChernClass *class_);

/**
 * # Safety
 * `s` must be a string returned by this library.
 */
void qhc_string_free(char *s);

/**
 * `θ[a;b](z, τ)` with its certified tail bound.
 *
 * # Safety
 * Output pointers must be valid for writes.
 */
enum QhcStatus qhc_theta(double z_re,
                         double z_im,
                         double tau_re,
                         double tau_im,
                         double a,
                         double b,
                         double *out_re,
                         double *out_im,
                         double *tail_bound);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QHC_H */
