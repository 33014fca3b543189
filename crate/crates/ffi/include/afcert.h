#ifndef AFCERT_H
#define AFCERT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Values of the `mode` argument of [`afc_check`].
 */
typedef enum AfcMode {
  AFC_MODE_STRICT = 0,
  AFC_MODE_EXTENDED = 1,
} AfcMode;

typedef enum AfcStatus {
  AFC_STATUS_OK = 0,
  AFC_STATUS_NULL_POINTER = 1,
  AFC_STATUS_INVALID_UTF8 = 2,
  AFC_STATUS_PARSE_ERROR = 3,
  AFC_STATUS_INVALID_ARGUMENT = 4,
  AFC_STATUS_BUDGET_EXCEEDED = 5,
  AFC_STATUS_INTERNAL = 6,
} AfcStatus;

/**
 * Values returned by [`afc_verdict_kind`].
 */
typedef enum AfcVerdictKind {
  AFC_VERDICT_KIND_FINITE_DESCENT = 0,
  AFC_VERDICT_KIND_FINITE = 1,
  AFC_VERDICT_KIND_CONDITIONAL_UNRESOLVED = 2,
  AFC_VERDICT_KIND_UNKNOWN = 3,
  AFC_VERDICT_KIND_INVALID = 4,
} AfcVerdictKind;

/**
 * Opaque verdict handle.
 */
typedef struct AfcVerdict AfcVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Decides the triple given as decimal strings. `mode` is an [`AfcMode`]
 * value. On success `*out` owns a new verdict.
 *
 * # Safety
 * `a`, `b`, `c` must be NUL-terminated strings and `out` a writable pointer.
 */
enum AfcStatus afc_check(const char *a,
                         const char *b,
                         const char *c,
                         int32_t mode,
                         struct AfcVerdict **out);

/**
 * An [`AfcVerdictKind`] value, or -1 for NULL.
 *
 * # Safety
 * `v` must be NULL or a live handle from [`afc_check`].
 */
int32_t afc_verdict_kind(const struct AfcVerdict *v);

/**
 * The CLI exit code of the verdict, or -1 for NULL.
 *
 * # Safety
 * `v` must be NULL or a live handle from [`afc_check`].
 */
int32_t afc_verdict_exit_code(const struct AfcVerdict *v);

/**
 * One-line JSON record. Free with [`afc_string_free`]; NULL for NULL.
 *
 * # Safety
 * `v` must be NULL or a live handle from [`afc_check`].
 */
char *afc_verdict_to_json(const struct AfcVerdict *v);

/**
 * Plain-text proof document. Free with [`afc_string_free`].
 *
 * # Safety
 * `v` must be NULL or a live handle from [`afc_check`].
 */
char *afc_verdict_explain(const struct AfcVerdict *v);

/**
 * # Safety
 * `v` must be NULL or a handle from [`afc_check`] not yet freed.
 */
void afc_verdict_free(struct AfcVerdict *v);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library not yet freed.
 */
void afc_string_free(char *s);

/**
 * Proper points of `2^r X + Y + Z = 0` over the `n` primes at `primes`
 * with exponents up to `exp_bound`. `*out_count` receives the number of
 * points and `*out_json` a JSON array of `[x, y, z]` decimal strings.
 *
 * # Safety
 * `primes` must point to `n` readable values (or be NULL with `n == 0`);
 * `out_count` and `out_json` must be writable.
 */
enum AfcStatus afc_sunit_enumerate(uint32_t r,
                                   const uint64_t *primes,
                                   size_t n,
                                   uint32_t exp_bound,
                                   uint64_t budget,
                                   size_t *out_count,
                                   char **out_json);

/**
 * Conductor of the Frey curve `Y^2 = X(X - A)(X + B)` as a decimal string.
 *
 * # Safety
 * `a`, `b` must be NUL-terminated strings and `out` writable.
 */
enum AfcStatus afc_frey_conductor(const char *a, const char *b, char **out);

/**
 * Message of the last failed call on this thread, or NULL. The pointer is
 * valid until the next call into the library from the same thread.
 */
const char *afc_last_error_message(void);

/**
 * Schema tag of the structured records, a static string.
 */
const char *afc_schema_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AFCERT_H */
