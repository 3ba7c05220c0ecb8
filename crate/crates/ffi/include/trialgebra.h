#ifndef TRIALGEBRA_H
#define TRIALGEBRA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every call. Values match the command-line exit codes where they overlap.
typedef enum TgStatus {
  TG_STATUS_OK = 0,
  // A check ran and failed.
  TG_STATUS_FAIL = 1,
  // Malformed JSON or an input that is not a valid group, loop or triality.
  TG_STATUS_INVALID_INPUT = 2,
  TG_STATUS_NULL_POINTER = 3,
  // A size cap was hit.
  TG_STATUS_CAP_EXCEEDED = 4,
  // The call does not apply to this kind of input.
  TG_STATUS_UNSUPPORTED = 5,
  TG_STATUS_PANIC = 6,
} TgStatus;

typedef struct TgLoop TgLoop;

// A triality input: a certified group with triality or the
// three-dimensional Lie example.
typedef struct TgTriality TgTriality;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. Valid until the next call.
const char *tg_last_error(void);

// Library version, static storage.
const char *tg_version(void);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void tg_string_free(char *s);

// Parses a triality or descriptor JSON document and certifies it.
// Uncertifiable triality files give `TG_STATUS_FAIL`.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum TgStatus tg_triality_from_json(const char *json, struct TgTriality **out);

// # Safety
// `t` must come from `tg_triality_from_json` and not have been freed.
void tg_triality_free(struct TgTriality *t);

// Order of the underlying group; 0 for the Lie example.
//
// # Safety
// `t` must be a live handle.
enum TgStatus tg_triality_group_order(const struct TgTriality *t, size_t *out);

// Checks the triality axioms of a JSON document without certifying it.
// Writes the itemized report as JSON; `TG_STATUS_FAIL` if any check fails.
//
// # Safety
// `json` must be a NUL-terminated string; `report` must be writable.
enum TgStatus tg_check_triality_json(const char *json, char **report);

// Extracts the Moufang loop. Writes the Moufang check report as JSON when
// `report` is not NULL.
//
// # Safety
// `t` must be a live handle, `out` writable, `report` NULL or writable.
enum TgStatus tg_extract_loop(const struct TgTriality *t, struct TgLoop **out, char **report);

// # Safety
// `l` must come from `tg_extract_loop` and not have been freed.
void tg_loop_free(struct TgLoop *l);

// # Safety
// `l` must be a live handle and `out` writable.
enum TgStatus tg_loop_order(const struct TgLoop *l, size_t *out);

// Product of loop elements `a` and `b` (0-based, 0 is the identity).
//
// # Safety
// `l` must be a live handle and `out` writable.
enum TgStatus tg_loop_mul(const struct TgLoop *l, size_t a, size_t b, size_t *out);

// The loop as a `{"order", "table"}` JSON document.
//
// # Safety
// `l` must be a live handle and `out` writable.
enum TgStatus tg_loop_to_json(const struct TgLoop *l, char **out);

// Runs the full pipeline at prime `p` and exponent `p^n`; 0 for either
// picks the value derived from the input. `TG_STATUS_OK` when every check
// passes or, for the Lie example, fails exactly where expected.
//
// # Safety
// `t` must be a live handle and `report` writable.
enum TgStatus tg_run_pipeline(const struct TgTriality *t, uint32_t p, uint32_t n, char **report);

// Dimensions of the degree `1..=max_degree` components of the free Malcev
// algebra on `m` generators over `F_p`, written to `totals[0..max_degree]`.
//
// # Safety
// `totals` must have room for `len >= max_degree` entries.
enum TgStatus tg_free_malcev_dims(size_t m,
                                  uint32_t p,
                                  size_t max_degree,
                                  size_t *totals,
                                  size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRIALGEBRA_H */
