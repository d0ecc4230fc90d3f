#ifndef WEYLFORGE_H
#define WEYLFORGE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every call.
 */
typedef enum WfStatus {
  WF_STATUS_OK = 0,
  WF_STATUS_NULL_POINTER = 1,
  WF_STATUS_INVALID_UTF8 = 2,
  WF_STATUS_EXPRESSION = 3,
  WF_STATUS_DOF_MISMATCH = 4,
  WF_STATUS_NEGATIVE_HBAR_POWER = 5,
  WF_STATUS_TYPE_MISMATCH = 6,
  WF_STATUS_CHECK_FAILED = 7,
  WF_STATUS_INVALID_ARGUMENT = 8,
  WF_STATUS_PANIC = 9,
} WfStatus;

/**
 * Output format for `wf_value_render`.
 */
typedef enum WfFormat {
  WF_FORMAT_TEXT = 0,
  WF_FORMAT_JSON = 1,
  WF_FORMAT_LATEX = 2,
} WfFormat;

/**
 * What a handle holds.
 */
typedef enum WfKind {
  WF_KIND_SCALAR = 0,
  WF_KIND_PHASE = 1,
  WF_KIND_OPERATOR = 2,
  WF_KIND_FLOW = 3,
} WfKind;

/**
 * Opaque value handle.
 */
typedef struct WfValue WfValue;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parse and evaluate an expression. `s_value` may be null for formal `s`.
 *
 * # Safety
 * `input` and a non-null `s_value` must be NUL-terminated strings; `out`
 * must be writable.
 */
enum WfStatus wf_eval(const char *input, size_t dof, const char *s_value, struct WfValue **out);

/**
 * Normal form of the s-ordered monomial `t_nm` for one degree of freedom.
 *
 * # Safety
 * A non-null `s_value` must be a NUL-terminated string; `out` must be writable.
 */
enum WfStatus wf_t_monomial(uint32_t n, uint32_t m, const char *s_value, struct WfValue **out);

/**
 * Poisson bracket of two phase-space values.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum WfStatus wf_poisson(const struct WfValue *a, const struct WfValue *b, struct WfValue **out);

/**
 * Moyal bracket of two phase-space values.
 *
 * # Safety
 * `a` and `b` must be live handles; a non-null `s_value` must be a
 * NUL-terminated string; `out` must be writable.
 */
enum WfStatus wf_moyal(const struct WfValue *a,
                       const struct WfValue *b,
                       const char *s_value,
                       struct WfValue **out);

/**
 * Star product of two phase-space values.
 *
 * # Safety
 * As for `wf_moyal`.
 */
enum WfStatus wf_star(const struct WfValue *a,
                      const struct WfValue *b,
                      const char *s_value,
                      struct WfValue **out);

/**
 * Poisson-Moyal bracket of two operator values.
 *
 * # Safety
 * As for `wf_moyal`.
 */
enum WfStatus wf_pmb(const struct WfValue *a,
                     const struct WfValue *b,
                     const char *s_value,
                     struct WfValue **out);

/**
 * Diamond product of two operator values.
 *
 * # Safety
 * As for `wf_moyal`.
 */
enum WfStatus wf_diamond(const struct WfValue *a,
                         const struct WfValue *b,
                         const char *s_value,
                         struct WfValue **out);

/**
 * Commutator `ab - ba` of two operator values.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum WfStatus wf_commutator(const struct WfValue *a, const struct WfValue *b, struct WfValue **out);

/**
 * Map a phase-space value to its s-ordered operator.
 *
 * # Safety
 * `a` must be a live handle; a non-null `s_value` must be a NUL-terminated
 * string; `out` must be writable.
 */
enum WfStatus wf_ms(const struct WfValue *a, const char *s_value, struct WfValue **out);

/**
 * Inverse of `wf_ms`.
 *
 * # Safety
 * As for `wf_ms`.
 */
enum WfStatus wf_ms_inverse(const struct WfValue *a, const char *s_value, struct WfValue **out);

/**
 * Render a value as a newly allocated string.
 *
 * # Safety
 * `v` must be a live handle; `out` must be writable. Free the result with
 * `wf_string_free`.
 */
enum WfStatus wf_value_render(const struct WfValue *v, enum WfFormat format, char **out);

/**
 * Kind of the value behind a handle.
 *
 * # Safety
 * `v` must be a live handle; `out` must be writable.
 */
enum WfStatus wf_value_kind(const struct WfValue *v, enum WfKind *out);

/**
 * Exact equality; a scalar equals the matching constant polynomial.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum WfStatus wf_value_equal(const struct WfValue *a, const struct WfValue *b, bool *out);

/**
 * Run a conformance suite and return its JSON report. Returns
 * `WfStatus::CheckFailed` (with the report still written) when a check fails.
 *
 * # Safety
 * `suite` must be a NUL-terminated string; `out_json` must be writable.
 */
enum WfStatus wf_check_suite(const char *suite, uint64_t seed, char **out_json);

/**
 * Release a handle. Null is ignored.
 *
 * # Safety
 * `v` must be null or a handle not yet freed.
 */
void wf_value_free(struct WfValue *v);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void wf_string_free(char *s);

/**
 * Message of the last failure on this thread; empty after a success. The
 * pointer stays valid until the next call on the same thread.
 */
const char *wf_last_error(void);

/**
 * Library version as a static string.
 */
const char *wf_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WEYLFORGE_H */
