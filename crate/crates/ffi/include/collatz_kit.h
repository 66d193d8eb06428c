#ifndef COLLATZ_KIT_H
#define COLLATZ_KIT_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CkStatus {
  CK_STATUS_OK = 0,
  CK_STATUS_NULL_POINTER = 1,
  CK_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The result does not fit the fixed-width output type.
   */
  CK_STATUS_OVERFLOW = 3,
  CK_STATUS_INDEX_OUT_OF_RANGE = 4,
  CK_STATUS_PANIC = 5,
} CkStatus;

typedef enum CkSubset {
  CK_SUBSET_EVEN_POWER = 0,
  CK_SUBSET_ODD_POWER = 1,
} CkSubset;

typedef struct CkTable CkTable;

typedef struct CkTrajectory CkTrajectory;

/**
 * One step of the range recurrence, in machine words.
 */
typedef struct CkRangeStep {
  uint64_t n;
  uint64_t p;
  uint64_t odd_candidate;
  uint64_t even_candidate;
  uint64_t chosen;
  int64_t growth;
} CkRangeStep;

/**
 * Outcome of a forward sweep.
 */
typedef struct CkVerifySummary {
  uint64_t verified;
  uint64_t failures;
  uint64_t max_steps_used;
} CkVerifySummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *ck_last_error(void);

/**
 * Releases a string returned by this library. Null is accepted.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void ck_string_free(char *s);

/**
 * The Collatz successor of `n`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CkStatus ck_step(uint64_t n, uint64_t *out);

/**
 * `(3n + 1) / 2^x` for odd `n`, with the exponent `x`.
 *
 * # Safety
 * `out_value` and `out_x` must be valid for writes.
 */
enum CkStatus ck_odd_successor(uint64_t n, uint64_t *out_value, uint32_t *out_x);

/**
 * The odd predecessor `(2^x n2 - 1) / 3`. `*out_exists` is false when
 * `2^x n2 - 1` is not divisible by 3.
 *
 * # Safety
 * `out_n1` and `out_exists` must be valid for writes.
 */
enum CkStatus ck_predecessor(uint64_t n2, uint32_t x, uint64_t *out_n1, bool *out_exists);

/**
 * Forward trajectory of the decimal number `start`, stopping at 1 or after
 * `max_steps` steps.
 *
 * # Safety
 * `start` must be a nul-terminated string; `out` must be valid for writes.
 */
enum CkStatus ck_trajectory_new(const char *start, uint64_t max_steps, struct CkTrajectory **out);

/**
 * Number of steps taken.
 *
 * # Safety
 * `t` must be a live handle; `out` must be valid for writes.
 */
enum CkStatus ck_trajectory_len(const struct CkTrajectory *t, uint64_t *out);

/**
 * Whether the trajectory reached 1 within its budget.
 *
 * # Safety
 * `t` must be a live handle; `out` must be valid for writes.
 */
enum CkStatus ck_trajectory_terminated(const struct CkTrajectory *t, bool *out);

/**
 * Value at `index`, where index 0 is the start and `len` the last value,
 * as a decimal string owned by the caller.
 *
 * # Safety
 * `t` must be a live handle; `out` must be valid for writes.
 */
enum CkStatus ck_trajectory_value(const struct CkTrajectory *t, uint64_t index, char **out);

/**
 * # Safety
 * `t` must be null or a handle not freed before.
 */
void ck_trajectory_free(struct CkTrajectory *t);

/**
 * Predecessor table of one residue class.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CkStatus ck_table_new(enum CkSubset subset,
                           uint32_t rows,
                           uint32_t cols,
                           struct CkTable **out);

/**
 * Cell `(row, col)`: the predecessor `n1`, its exponent, and whether it
 * has predecessors of its own.
 *
 * # Safety
 * `t` must be a live handle; out-pointers must be valid for writes.
 */
enum CkStatus ck_table_get(const struct CkTable *t,
                           uint32_t row,
                           uint32_t col,
                           uint64_t *out_n1,
                           uint32_t *out_x,
                           bool *out_generates);

/**
 * The `n2` heading row `row`.
 *
 * # Safety
 * `t` must be a live handle; `out` must be valid for writes.
 */
enum CkStatus ck_table_row_n2(const struct CkTable *t, uint32_t row, uint64_t *out);

/**
 * # Safety
 * `t` must be null or a handle not freed before.
 */
void ck_table_free(struct CkTable *t);

/**
 * Closed-form totals for `N = (4^k - 1) / 3` as a JSON object owned by the
 * caller.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CkStatus ck_totals_json(uint64_t k, char **out);

/**
 * One step of the range recurrence from the odd bound `n`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CkStatus ck_range_step(uint64_t n, struct CkRangeStep *out);

/**
 * Checks every odd start up to `bound`. `shards = 0` uses all cores.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CkStatus ck_verify_forward(uint64_t bound,
                                uint64_t max_steps,
                                uint32_t shards,
                                struct CkVerifySummary *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COLLATZ_KIT_H */
