#ifndef APSIDON_H
#define APSIDON_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ApsStatus {
  APS_STATUS_OK = 0,
  APS_STATUS_NULL_ARGUMENT = 1,
  APS_STATUS_INVALID_UTF8 = 2,
  APS_STATUS_PARSE = 3,
  APS_STATUS_PRECONDITION = 4,
  APS_STATUS_DOMAIN = 5,
  APS_STATUS_SEARCH_FAILED = 6,
  APS_STATUS_OVERFLOW = 7,
  APS_STATUS_INTERNAL = 8,
  APS_STATUS_PANIC = 9,
} ApsStatus;

/**
 * A verified chain of progressions.
 */
typedef struct ApsChain ApsChain;

/**
 * A validated mapping.
 */
typedef struct ApsMapping ApsMapping;

/**
 * A finite set of rationals.
 */
typedef struct ApsSet ApsSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into the library from the same thread.
 */
const char *aps_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void aps_string_free(char *s);

/**
 * Parses a comma-separated list such as `"0,1/2,3"`.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
enum ApsStatus aps_set_parse(const char *text, struct ApsSet **out);

/**
 * # Safety
 * `set` must be null or a handle from this library, not yet freed.
 */
void aps_set_free(struct ApsSet *set);

/**
 * # Safety
 * `set` must be a live handle; `out` must be writable.
 */
enum ApsStatus aps_set_len(const struct ApsSet *set, size_t *out);

/**
 * # Safety
 * `set` must be a live handle; `out` must be writable.
 */
enum ApsStatus aps_set_is_sidon(const struct ApsSet *set, bool *out);

/**
 * Ordered solutions of `l1 + l2 = l3 + l4`; `APS_STATUS_OVERFLOW` past `u64`.
 *
 * # Safety
 * `set` must be a live handle; `out` must be writable.
 */
enum ApsStatus aps_set_count_quadruples(const struct ApsSet *set, uint64_t *out);

/**
 * `{0} ∪ M ∪ (M+M) ∪ (M−M) ∪ (M+M−M)` as a new handle.
 *
 * # Safety
 * `set` must be a live handle; `out` must be writable.
 */
enum ApsStatus aps_set_gamma(const struct ApsSet *set, struct ApsSet **out);

/**
 * `{"elements":["p/q",...]}`.
 *
 * # Safety
 * `set` must be a live handle; `out` must be writable.
 */
enum ApsStatus aps_set_to_json(const struct ApsSet *set, char **out);

/**
 * Accepts the CLI mapping specs (`square`, `poly:0,0,1`, `cantor`, ...) or JSON.
 *
 * # Safety
 * `spec` must be a nul-terminated string; `out` must be writable.
 */
enum ApsStatus aps_mapping_parse(const char *spec, struct ApsMapping **out);

/**
 * # Safety
 * `mapping` must be null or a handle from this library, not yet freed.
 */
void aps_mapping_free(struct ApsMapping *mapping);

/**
 * # Safety
 * `mapping` must be a live handle, `t` a nul-terminated string, `out` writable.
 */
enum ApsStatus aps_mapping_eval(const struct ApsMapping *mapping, const char *t, char **out);

/**
 * Cantor staircase at `t ∈ [0, 1]`, exactly.
 *
 * # Safety
 * `t` must be a nul-terminated string; `out` must be writable.
 */
enum ApsStatus aps_cantor_eval(const char *t, char **out);

/**
 * Builds progressions of lengths `4..=n_max` with the default search box.
 * Returns `APS_STATUS_SEARCH_FAILED` when a stage exhausts `budget`.
 *
 * # Safety
 * `mapping` must be a live handle; `out` must be writable.
 */
enum ApsStatus aps_chain_build(const struct ApsMapping *mapping,
                               size_t n_max,
                               uint64_t budget,
                               uint64_t seed,
                               struct ApsChain **out);

/**
 * # Safety
 * `chain` must be null or a handle from this library, not yet freed.
 */
void aps_chain_free(struct ApsChain *chain);

/**
 * Number of stages.
 *
 * # Safety
 * `chain` must be a live handle; `out` must be writable.
 */
enum ApsStatus aps_chain_len(const struct ApsChain *chain, size_t *out);

/**
 * Union of the images as a new set handle.
 *
 * # Safety
 * `chain` must be a live handle; `out` must be writable.
 */
enum ApsStatus aps_chain_union(const struct ApsChain *chain, struct ApsSet **out);

/**
 * # Safety
 * `chain` must be a live handle; `out` must be writable.
 */
enum ApsStatus aps_chain_to_json(const struct ApsChain *chain, char **out);

/**
 * Exhaustive check over distinct `k ∈ [1, K]⁴`.
 *
 * # Safety
 * `passed` and `tuples_checked` must be writable.
 */
enum ApsStatus aps_verify_kernel(uint32_t k_max, bool *passed, uint64_t *tuples_checked);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* APSIDON_H */
