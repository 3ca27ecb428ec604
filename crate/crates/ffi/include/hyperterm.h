#ifndef HYPERTERM_H
#define HYPERTERM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result code of every fallible call.
 */
typedef enum HtStatus {
  HT_STATUS_OK = 0,
  /*
   A required pointer argument was null.
   */
  HT_STATUS_NULL_POINTER = 1,
  /*
   A string argument was not valid UTF-8.
   */
  HT_STATUS_INVALID_UTF8 = 2,
  /*
   Malformed JSON or polynomial text.
   */
  HT_STATUS_PARSE = 3,
  /*
   Arity mismatch between arguments.
   */
  HT_STATUS_DIMENSION = 4,
  /*
   The input violates a documented precondition.
   */
  HT_STATUS_PRECONDITION = 5,
  /*
   The generators are not compatible.
   */
  HT_STATUS_COCYCLE = 6,
  /*
   The structure construction failed.
   */
  HT_STATUS_STRUCTURE = 7,
  /*
   A factor does not split over the rationals.
   */
  HT_STATUS_SPLITTING = 8,
  /*
   A zero polynomial or zero product term where a nonzero one is needed.
   */
  HT_STATUS_ZERO = 9,
  /*
   An internal consistency check failed.
   */
  HT_STATUS_INTEGRITY = 10,
  /*
   The value is not defined at the requested point.
   */
  HT_STATUS_UNDEFINED = 11,
  /*
   A panic was caught at the boundary.
   */
  HT_STATUS_PANIC = 12,
} HtStatus;

/*
 A parsed term specification.
 */
typedef struct HtSpec HtSpec;

/*
 A piecewise closed-form structure.
 */
typedef struct HtStructure HtStructure;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Parses a JSON term specification into a new handle.

 # Safety
 `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum HtStatus ht_spec_parse(const char *json, struct HtSpec **out);

/*
 Releases a specification. Null is ignored.

 # Safety
 `spec` must come from [`ht_spec_parse`] and not be used afterwards.
 */
void ht_spec_free(struct HtSpec *spec);

/*
 Number of variables of the specification.

 # Safety
 `spec` must be a live handle and `out` a valid pointer.
 */
enum HtStatus ht_spec_arity(const struct HtSpec *spec, size_t *out);

/*
 Writes whether the generators satisfy the compatibility conditions.

 # Safety
 `spec` must be a live handle and `out` a valid pointer.
 */
enum HtStatus ht_check_compatibility(const struct HtSpec *spec, bool *out);

/*
 The Ore–Sato decomposition as JSON.

 # Safety
 `spec` must be a live handle and `out` a valid pointer.
 */
enum HtStatus ht_decompose_json(const struct HtSpec *spec, char **out);

/*
 Builds the piecewise structure of a seeded specification.

 # Safety
 `spec` must be a live handle and `out` a valid pointer.
 */
enum HtStatus ht_structure_build(const struct HtSpec *spec, struct HtStructure **out);

/*
 Releases a structure. Null is ignored.

 # Safety
 `ps` must come from [`ht_structure_build`] and not be used afterwards.
 */
void ht_structure_free(struct HtStructure *ps);

/*
 The structure as JSON.

 # Safety
 `ps` must be a live handle and `out` a valid pointer.
 */
enum HtStatus ht_structure_json(const struct HtStructure *ps, char **out);

/*
 Per-region factorial forms as a JSON array.

 # Safety
 `ps` must be a live handle and `out` a valid pointer.
 */
enum HtStatus ht_factorial_json(const struct HtStructure *ps, char **out);

/*
 Per-region Pochhammer forms as a JSON array.

 # Safety
 `ps` must be a live handle and `out` a valid pointer.
 */
enum HtStatus ht_pochhammer_json(const struct HtStructure *ps, char **out);

/*
 Evaluates the closed form at `z[0..len]` and writes the exact value as
 text (`p/q` or an integer). Returns `HT_STATUS_UNDEFINED` where the value
 is not defined.

 # Safety
 `ps` must be a live handle, `z` must point to `len` integers and `out`
 must be a valid pointer.
 */
enum HtStatus ht_structure_eval(const struct HtStructure *ps,
                                const int64_t *z,
                                size_t len,
                                char **out);

/*
 Compares the closed form with recurrence propagation on the window
 `lo[i] ≤ z_i ≤ hi[i]` and writes the report as JSON.

 # Safety
 Handles must be live, `lo` and `hi` must point to `len` integers and `out`
 must be a valid pointer.
 */
enum HtStatus ht_compare_json(const struct HtSpec *spec,
                              const struct HtStructure *ps,
                              const int64_t *lo,
                              const int64_t *hi,
                              size_t len,
                              char **out);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must come from this library and not be used afterwards.
 */
void ht_string_free(char *s);

/*
 Message of the last failed call on this thread, or an empty string. The
 pointer stays valid until the next call into this library on the thread.
 */
const char *ht_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYPERTERM_H */
