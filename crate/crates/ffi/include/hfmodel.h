#ifndef HFMODEL_H
#define HFMODEL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes. Zero is success.
 */
typedef enum HfStatus {
  HF_STATUS_OK = 0,
  HF_STATUS_NULL_ARGUMENT = 1,
  HF_STATUS_PARSE = 2,
  HF_STATUS_BUDGET = 3,
  HF_STATUS_PRECONDITION = 4,
  HF_STATUS_INTERNAL = 5,
  HF_STATUS_INVALID_UTF8 = 6,
  HF_STATUS_PANIC = 7,
} HfStatus;

/*
 A theory package.
 */
typedef struct HfPackage HfPackage;

/*
 A finished construction run.
 */
typedef struct HfRun HfRun;

/*
 An immutable hereditarily finite set.
 */
typedef struct HfSetHandle HfSetHandle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Copies the last error message of this thread into `*out`, or stores
 null if there is none.

 # Safety
 `out` must be valid for writes.
 */
enum HfStatus hf_last_error(char **out);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void hf_string_free(char *s);

/*
 Parses a set literal such as `{{},{{}}}`.

 # Safety
 `src` must be a nul-terminated string and `out` valid for writes.
 */
enum HfStatus hf_set_parse(const char *src, struct HfSetHandle **out);

/*
 # Safety
 `set` must be a live handle or null.
 */
void hf_set_free(struct HfSetHandle *set);

/*
 Prints a set in literal syntax.

 # Safety
 `set` must be a live handle and `out` valid for writes.
 */
enum HfStatus hf_set_to_string(const struct HfSetHandle *set, char **out);

/*
 The Ackermann code of a set, in decimal.

 # Safety
 `set` must be a live handle and `out` valid for writes.
 */
enum HfStatus hf_iack(const struct HfSetHandle *set, char **out);

/*
 The set with the given decimal Ackermann code.

 # Safety
 `decimal` must be a nul-terminated string and `out` valid for writes.
 */
enum HfStatus hf_iack_inv(const char *decimal, struct HfSetHandle **out);

/*
 Membership of `(a, b, c)` in `S`.

 # Safety
 The handles must be live and `out` valid for writes.
 */
enum HfStatus hf_decide_s(const struct HfSetHandle *a,
                          const struct HfSetHandle *b,
                          const struct HfSetHandle *c,
                          bool *out);

/*
 A set `c` with `¬S(a, b, c)`; requires `a ∉ b`.

 # Safety
 The handles must be live and `out` valid for writes.
 */
enum HfStatus hf_indef_witness(const struct HfSetHandle *a,
                               const struct HfSetHandle *b,
                               struct HfSetHandle **out);

/*
 `name` is `generic` or `bounded_zf`. `max_steps = 0` leaves the
 refutation budget uncapped.

 # Safety
 `name` must be a nul-terminated string and `out` valid for writes.
 */
enum HfStatus hf_package_new(const char *name,
                             uint64_t seed,
                             size_t max_steps,
                             uint32_t screen_rank,
                             struct HfPackage **out);

/*
 The generic package with the decision on `literal`'s atom flipped in
 `u_i` for `i < until`.

 # Safety
 `literal` must be a nul-terminated string and `out` valid for writes.
 */
enum HfStatus hf_package_new_injury(uint64_t seed,
                                    const char *literal,
                                    size_t until,
                                    struct HfPackage **out);

/*
 # Safety
 `pkg` must be a live handle or null.
 */
void hf_package_free(struct HfPackage *pkg);

/*
 Runs `stages` stages of the construction.

 # Safety
 `pkg` must be a live handle and `out` valid for writes.
 */
enum HfStatus hf_run_new(const struct HfPackage *pkg, size_t stages, struct HfRun **out);

/*
 # Safety
 `r` must be a live handle or null.
 */
void hf_run_free(struct HfRun *r);

/*
 The trace file text of a run.

 # Safety
 `r` must be a live handle and `out` valid for writes.
 */
enum HfStatus hf_run_trace(const struct HfRun *r, char **out);

/*
 Number of recorded snapshots, including the initial one.

 # Safety
 `r` must be a live handle and `out` valid for writes.
 */
enum HfStatus hf_run_len(const struct HfRun *r, size_t *out);

/*
 Whether every stage passed L1–L6 and the global checks pass over
 `window`. `report` may be null; otherwise it receives the global report.

 # Safety
 `r` must be a live handle, `passed` valid for writes, and `report` null
 or valid for writes.
 */
enum HfStatus hf_run_check(const struct HfRun *r, size_t window, bool *passed, char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HFMODEL_H */
