#ifndef FIBERCHECK_H
#define FIBERCHECK_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every entry point.
 */
typedef enum FcStatus {
  FC_STATUS_OK = 0,
  /**
   * Null pointer or invalid UTF-8.
   */
  FC_STATUS_INVALID_ARGUMENT = 1,
  /**
   * Malformed document or literal.
   */
  FC_STATUS_PARSE = 2,
  /**
   * Well-formed input rejected by the engine.
   */
  FC_STATUS_MATH = 3,
  /**
   * Cross-checked computations disagreed.
   */
  FC_STATUS_VIOLATION = 4,
  /**
   * The engine panicked; the message is in the error slot.
   */
  FC_STATUS_PANIC = 5,
} FcStatus;

/**
 * Opaque bounded complex handle.
 */
typedef struct FcComplex FcComplex;

/**
 * Opaque matrix handle.
 */
typedef struct FcMatrix FcMatrix;

/**
 * Opaque finitely presented module handle.
 */
typedef struct FcModule FcModule;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call on the same thread.
 */
const char *fc_last_error(void);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void fc_string_free(char *s);

/**
 * Library version as a static string.
 */
const char *fc_version(void);

/**
 * Parse a matrix document.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` writable.
 */
enum FcStatus fc_matrix_from_json(const char *json, struct FcMatrix **out);

/**
 * # Safety
 * `m` must be null or a live handle from [`fc_matrix_from_json`].
 */
void fc_matrix_free(struct FcMatrix *m);

/**
 * Verified Smith normal form as JSON: elementary divisors and `U`, `D`, `V`
 * with `A = U D V`.
 *
 * # Safety
 * `m` must be a live handle and `out` writable.
 */
enum FcStatus fc_matrix_snf_json(const struct FcMatrix *m, char **out);

/**
 * Parse a module document.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` writable.
 */
enum FcStatus fc_module_from_json(const char *json, struct FcModule **out);

/**
 * # Safety
 * `m` must be null or a live handle from [`fc_module_from_json`].
 */
void fc_module_free(struct FcModule *m);

/**
 * Invariant factors as JSON `{"free_rank": r, "torsion": [...]}`.
 *
 * # Safety
 * `m` must be a live handle and `out` writable.
 */
enum FcStatus fc_module_invariant_factors_json(const struct FcModule *m, char **out);

/**
 * Dimension of the fiber `M ⊗ κ(q)` at a prime literal such as `"(0)"` or `"3"`.
 *
 * # Safety
 * `m` must be a live handle, `prime` nul-terminated and `out` writable.
 */
enum FcStatus fc_module_fiber_dimension(const struct FcModule *m,
                                        const char *prime,
                                        uintptr_t *out);

/**
 * Parse a complex document.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` writable.
 */
enum FcStatus fc_complex_from_json(const char *json, struct FcComplex **out);

/**
 * # Safety
 * `c` must be null or a live handle from [`fc_complex_from_json`].
 */
void fc_complex_free(struct FcComplex *c);

/**
 * Homology as JSON, degrees descending.
 *
 * # Safety
 * `c` must be a live handle and `out` writable.
 */
enum FcStatus fc_complex_homology_json(const struct FcComplex *c, char **out);

/**
 * Fiber homology dimensions at one prime as JSON.
 *
 * # Safety
 * `c` must be a live handle, `prime` nul-terminated and `out` writable.
 */
enum FcStatus fc_complex_fiber_profile_json(const struct FcComplex *c,
                                            const char *prime,
                                            char **out);

/**
 * Full theorem report as JSON. A `VIOLATION` verdict returns
 * [`FcStatus::Violation`] and still writes the report.
 *
 * # Safety
 * `c` must be a live handle and `out` writable.
 */
enum FcStatus fc_complex_check_theorem_json(const struct FcComplex *c, char **out);

/**
 * Universal exactness, cross-checked three ways; writes 1 or 0.
 *
 * # Safety
 * `c` must be a live handle and `out` writable.
 */
enum FcStatus fc_complex_is_universally_exact(const struct FcComplex *c, int *out);

/**
 * Run a CLI command in-process. `argv` holds `argc` arguments without the
 * program name; `input` (nullable) is served as stdin. Report and
 * diagnostics are written to `out` and `err`, the process exit code to
 * `exit_code`.
 *
 * # Safety
 * `argv` must point to `argc` nul-terminated strings; the three output
 * pointers must be writable.
 */
enum FcStatus fc_run_command(const char *const *argv,
                             uintptr_t argc,
                             const char *input,
                             char **out,
                             char **err,
                             int *exit_code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FIBERCHECK_H */
