#ifndef BS_SHIFT_H
#define BS_SHIFT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Counting method for [`bs_count_colorings`].
 */
typedef enum BsMethod {
  BS_METHOD_AUTO = 0,
  BS_METHOD_BACKTRACKING = 1,
  BS_METHOD_FRONTIER = 2,
  BS_METHOD_TREE = 3,
} BsMethod;

/**
 * Result codes shared by every entry point.
 */
typedef enum BsStatus {
  BS_STATUS_OK = 0,
  BS_STATUS_NULL_POINTER = 1,
  BS_STATUS_INVALID_ARGUMENT = 2,
  BS_STATUS_PARSE = 3,
  /**
   * A vertex, node or state budget ran out, or a number grew too large.
   */
  BS_STATUS_RESOURCE = 4,
  /**
   * A check ran and its answer was negative or a construction failed.
   */
  BS_STATUS_MATHEMATICAL = 5,
  BS_STATUS_INVALID_UTF8 = 6,
  BS_STATUS_PANIC = 7,
} BsStatus;

/**
 * Opaque group element of BS(1,N) in normal form.
 */
typedef struct BsElement BsElement;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call into the library on the same thread.
 */
const char *bs_last_error_message(void);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and must not be freed twice.
 */
void bs_string_free(char *s);

/**
 * Parses a word over `a b A B` (with optional `^exp`) and reduces it in BS(1,n).
 *
 * # Safety
 * `word` must be a NUL-terminated string; `out` must be writable.
 */
enum BsStatus bs_element_parse(uint32_t n, const char *word, struct BsElement **out);

/**
 * `g * h`. Both elements must belong to the same group.
 *
 * # Safety
 * `g` and `h` must be live elements; `out` must be writable.
 */
enum BsStatus bs_element_multiply(const struct BsElement *g,
                                  const struct BsElement *h,
                                  struct BsElement **out);

/**
 * # Safety
 * `g` must be a live element; `out` must be writable.
 */
enum BsStatus bs_element_invert(const struct BsElement *g, struct BsElement **out);

/**
 * Normal form `b^-j a^k b^i`. `k` is returned as a decimal string since it
 * can exceed 64 bits.
 *
 * # Safety
 * `g` must be a live element; the out pointers must be writable.
 */
enum BsStatus bs_element_coords(const struct BsElement *g, uint64_t *j, char **k, uint64_t *i);

/**
 * Canonical word of `g`, e.g. `B a^3 b^2`; the identity is `e`.
 *
 * # Safety
 * `g` must be a live element; `out` must be writable.
 */
enum BsStatus bs_element_to_string(const struct BsElement *g, char **out);

/**
 * # Safety
 * `a` and `b` must be live elements; `out` must be writable.
 */
enum BsStatus bs_element_equal(const struct BsElement *a, const struct BsElement *b, bool *out);

/**
 * Releases an element. Null is ignored.
 *
 * # Safety
 * `g` must come from this library and must not be freed twice.
 */
void bs_element_free(struct BsElement *g);

/**
 * Number of proper `colors`-colorings of the rectangle `R_m` in BS(1,n),
 * as a decimal string. Default budgets apply.
 *
 * # Safety
 * `out` must be writable.
 */
enum BsStatus bs_count_colorings(uint32_t n,
                                 uint32_t colors,
                                 uint32_t m,
                                 enum BsMethod method,
                                 char **out);

/**
 * Boundary edge count of `R_m`, by enumeration and by the closed form.
 * Returns [`BsStatus::Mathematical`] if they differ.
 *
 * # Safety
 * The out pointers must be writable.
 */
enum BsStatus bs_gamma(uint32_t n, uint32_t m, uint64_t *brute, uint64_t *closed);

/**
 * Checks the frozen 3-coloring for BS(1,n): properness on the ball of
 * `radius`, and unique refilling of every cell and edge of `R_3` and of
 * `R_2`. Returns [`BsStatus::Mathematical`] if any check fails; the flags
 * are written in both cases.
 *
 * # Safety
 * The out pointers must be writable.
 */
enum BsStatus bs_frozen_check(uint32_t n, uint32_t radius, bool *proper, bool *all_unique);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BS_SHIFT_H */
