#ifndef HECKE_MAHLER_H
#define HECKE_MAHLER_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes; 2, 3 and 4 match the command line exit codes.
typedef enum HmStatus {
  HM_STATUS_OK = 0,
  HM_STATUS_INTERNAL = 1,
  HM_STATUS_INVALID_INPUT = 2,
  HM_STATUS_UNDECIDABLE = 3,
  HM_STATUS_VERIFICATION = 4,
  HM_STATUS_NULL_POINTER = 5,
  HM_STATUS_OUT_OF_RANGE = 6,
} HmStatus;

// Opaque continued fraction expansion.
typedef struct HmExpansion HmExpansion;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread; empty after a success. Owned by the library.
const char *hm_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void hm_string_free(char *s);

// Expands `xi` for slope `slope` (`per:[...;...]` or `surd:(P,D,Q)`), intercept `rho`
// (`rat(p/q)`, `surd(P,D,Q)` or `digits[...]`) and the point `(1/b, 1/a)`, keeping `n`
// partial quotients after the head.
//
// # Safety
// `slope` and `rho` must be NUL-terminated strings; `out` must be writable.
enum HmStatus hm_expansion_new(const char *slope,
                               const char *rho,
                               uint64_t b,
                               uint64_t a,
                               size_t n,
                               struct HmExpansion **out);

// Releases an expansion. Null is ignored.
//
// # Safety
// `h` must come from [`hm_expansion_new`] and not have been freed.
void hm_expansion_free(struct HmExpansion *h);

// Number of integer partial quotients held; 0 for a null handle.
//
// # Safety
// `h` must be null or a live expansion.
size_t hm_expansion_len(const struct HmExpansion *h);

// 1 when the expansion starts with a fractional head, 0 otherwise or for a null handle.
//
// # Safety
// `h` must be null or a live expansion.
int32_t hm_expansion_is_improper(const struct HmExpansion *h);

// Partial quotient `i` (from 0) as a decimal string.
//
// # Safety
// `h` must be a live expansion; `out` must be writable.
enum HmStatus hm_expansion_term(const struct HmExpansion *h, size_t i, char **out);

// Fractional head as `p/q`; fails with `OutOfRange` when the expansion has none.
//
// # Safety
// `h` must be a live expansion; `out` must be writable.
enum HmStatus hm_expansion_head(const struct HmExpansion *h, char **out);

// The full expansion report as JSON.
//
// # Safety
// `h` must be a live expansion; `out` must be writable.
enum HmStatus hm_expansion_json(const struct HmExpansion *h, char **out);

// Certified enclosures of `xi` by two routes, as JSON.
//
// # Safety
// `slope` and `rho` must be NUL-terminated strings; `out` must be writable.
enum HmStatus hm_eval_json(const char *slope,
                           const char *rho,
                           uint64_t b,
                           uint64_t a,
                           uint32_t bits,
                           char **out);

// Irrationality exponent estimates to depth `k` (formula) and `j` (convergents), as JSON.
//
// # Safety
// `slope` and `rho` must be NUL-terminated strings; `out` must be writable.
enum HmStatus hm_exponent_json(const char *slope,
                               const char *rho,
                               uint64_t b,
                               uint64_t a,
                               size_t k,
                               size_t j,
                               char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HECKE_MAHLER_H */
