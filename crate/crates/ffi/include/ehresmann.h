#ifndef EHRESMANN_H
#define EHRESMANN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EhStatus {
  EH_STATUS_PASS = 0,
  EH_STATUS_FAIL = 1,
  EH_STATUS_INPUT = 2,
  EH_STATUS_INCONCLUSIVE = 3,
  EH_STATUS_NULL = 4,
  EH_STATUS_PANIC = 5,
} EhStatus;

/**
 * Opaque semigroup handle.
 */
typedef struct EhSemigroup EhSemigroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failing call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *eh_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void eh_string_free(char *s);

/**
 * Loads a `semigroup` or `relgen` document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum EhStatus eh_semigroup_from_json(const char *json, struct EhSemigroup **out);

/**
 * # Safety
 * `s` must be null or a handle from [`eh_semigroup_from_json`], not yet freed.
 */
void eh_semigroup_free(struct EhSemigroup *s);

/**
 * Number of elements, or 0 for a null handle.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
size_t eh_semigroup_size(const struct EhSemigroup *s);

/**
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum EhStatus eh_semigroup_mul(const struct EhSemigroup *s, size_t a, size_t b, size_t *out);

/**
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum EhStatus eh_semigroup_plus(const struct EhSemigroup *s, size_t a, size_t *out);

/**
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum EhStatus eh_semigroup_star(const struct EhSemigroup *s, size_t a, size_t *out);

/**
 * Checks the Ehresmann axioms. `restriction` adds ample identities:
 * 0 none, 1 left, 2 right, 3 both. The JSON report is written to `report`
 * when it is not null.
 *
 * # Safety
 * `s` must be a live handle; `report` must be null or writable.
 */
enum EhStatus eh_semigroup_verify(const struct EhSemigroup *s, uint32_t restriction, char **report);

/**
 * Sigma classes as a JSON array of arrays of element indices.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum EhStatus eh_semigroup_sigma(const struct EhSemigroup *s, char **out);

/**
 * The semigroup as a `semigroup` document.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum EhStatus eh_semigroup_to_json(const struct EhSemigroup *s, char **out);

/**
 * Verifies any document the command line `verify` accepts.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `report` must be null or writable.
 */
enum EhStatus eh_verify_json(const char *json, char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EHRESMANN_H */
