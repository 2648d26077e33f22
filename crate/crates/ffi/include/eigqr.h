#ifndef EIGQR_H
#define EIGQR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  EQR_STATUS_OK = 0,
  /**
   * Null pointer, bad enum value, invalid configuration or too small a buffer.
   */
  EQR_STATUS_USAGE = 1,
  /**
   * Unreadable or malformed input, wrong shape, non-finite entries.
   */
  EQR_STATUS_INPUT = 2,
  /**
   * Numerical breakdown or rank deficiency.
   */
  EQR_STATUS_NUMERICAL = 3,
  /**
   * The iteration budget ran out; the report is still produced.
   */
  EQR_STATUS_NOT_CONVERGED = 4,
  EQR_STATUS_PANIC = 5,
} EqrStatus;

enum EqrShift
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : uint32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  EQR_SHIFT_NONE = 0,
  EQR_SHIFT_RAYLEIGH = 1,
  EQR_SHIFT_WILKINSON = 2,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum EqrShift EqrShift;
#else
typedef uint32_t EqrShift;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

enum EqrQrMethod
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : uint32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  EQR_QR_METHOD_HOUSEHOLDER = 0,
  EQR_QR_METHOD_GIVENS = 1,
  EQR_QR_METHOD_GRAM_SCHMIDT_CLASSICAL = 2,
  EQR_QR_METHOD_GRAM_SCHMIDT_MODIFIED = 3,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum EqrQrMethod EqrQrMethod;
#else
typedef uint32_t EqrQrMethod;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

enum EqrDeflationMode
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : uint32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  EQR_DEFLATION_MODE_FULL = 0,
  EQR_DEFLATION_MODE_TRAILING_ONLY = 1,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum EqrDeflationMode EqrDeflationMode;
#else
typedef uint32_t EqrDeflationMode;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

enum EqrSolver
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : uint32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  EQR_SOLVER_ENHANCED = 0,
  EQR_SOLVER_WILKINSON_NO_DEFLATE = 1,
  EQR_SOLVER_RAYLEIGH = 2,
  EQR_SOLVER_PLAIN = 3,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum EqrSolver EqrSolver;
#else
typedef uint32_t EqrSolver;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

/**
 * Opaque dense complex matrix.
 */
typedef struct EqrMatrix EqrMatrix;

/**
 * Opaque solver result.
 */
typedef struct EqrReport EqrReport;

/**
 * Solver settings. Enum-valued fields hold the `EqrShift`, `EqrQrMethod`
 * and `EqrDeflationMode` constants; out-of-range values are rejected.
 */
typedef struct {
  size_t k_max;
  double eps;
  double deflation_tol;
  uint32_t shift;
  uint32_t qr_method;
  uint32_t deflation_mode;
  /**
   * Nonzero to balance before iterating.
   */
  int balance;
} EqrConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code. Never null.
 */
const char *eqr_status_string(int status);

/**
 * Message for the last failed call on this thread, or null if it succeeded.
 * The pointer is valid until the next `eqr_*` call on the same thread.
 */
const char *eqr_last_error_message(void);

const char *eqr_version(void);

/**
 * Builds a `rows x cols` matrix from row-major real and imaginary parts.
 * `im` may be null for a real matrix.
 *
 * # Safety
 * `re` (and `im` when non-null) must point to `rows * cols` doubles and
 * `out` must be a valid pointer.
 */
EqrStatus eqr_matrix_new(size_t rows,
                         size_t cols,
                         const double *re,
                         const double *im,
                         EqrMatrix **out);

/**
 * Reads a `.mtx`/`.mm` (Matrix Market) or `.csv` file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
EqrStatus eqr_matrix_read(const char *path, EqrMatrix **out);

/**
 * Writes a matrix; the format follows the file extension.
 *
 * # Safety
 * `m` must come from this library and `path` be NUL-terminated.
 */
EqrStatus eqr_matrix_write(const EqrMatrix *m, const char *path);

/**
 * Row count, or 0 for a null handle.
 *
 * # Safety
 * `m` must be null or come from this library.
 */
size_t eqr_matrix_rows(const EqrMatrix *m);

/**
 * Column count, or 0 for a null handle.
 *
 * # Safety
 * `m` must be null or come from this library.
 */
size_t eqr_matrix_cols(const EqrMatrix *m);

/**
 * # Safety
 * `m` must come from this library; `re` and `im` must be valid pointers.
 */
EqrStatus eqr_matrix_get(const EqrMatrix *m, size_t row, size_t col, double *re, double *im);

/**
 * # Safety
 * `m` must be null or a handle from this library not already freed.
 */
void eqr_matrix_free(EqrMatrix *m);

/**
 * Default enhanced-solver settings.
 */
EqrConfig eqr_config_default(void);

/**
 * Runs the deflating, balanced Wilkinson-shifted iteration with `config`
 * (null for defaults). On `Ok` or `NotConverged` `*out` receives a report.
 *
 * # Safety
 * `m` must come from this library, `config` be null or valid, `out` valid.
 */
EqrStatus eqr_eig(const EqrMatrix *m, const EqrConfig *config, EqrReport **out);

/**
 * Runs one of the named solvers. Only the tolerances and iteration budget
 * of `config` are used; each solver fixes its own shift and balancing.
 *
 * # Safety
 * As for [`eqr_eig`].
 */
EqrStatus eqr_solve(const EqrMatrix *m, uint32_t solver, const EqrConfig *config, EqrReport **out);

/**
 * Reference eigenvalues from the characteristic polynomial (n <= 12),
 * written to `re`/`im`, which must hold at least n values.
 *
 * # Safety
 * `m` must come from this library; `re`/`im` must hold `capacity` doubles.
 */
EqrStatus eqr_oracle_eigenvalues(const EqrMatrix *m, double *re, double *im, size_t capacity);

/**
 * # Safety
 * `r` must be null or come from this library.
 */
size_t eqr_report_eigenvalue_count(const EqrReport *r);

/**
 * Copies the eigenvalues in extraction order.
 *
 * # Safety
 * `r` must come from this library; `re`/`im` must hold `capacity` doubles.
 */
EqrStatus eqr_report_eigenvalues(const EqrReport *r, double *re, double *im, size_t capacity);

/**
 * # Safety
 * `r` must be null or come from this library.
 */
size_t eqr_report_iterations(const EqrReport *r);

/**
 * # Safety
 * `r` must be null or come from this library.
 */
size_t eqr_report_qr_steps(const EqrReport *r);

/**
 * # Safety
 * `r` must be null or come from this library.
 */
size_t eqr_report_deflations(const EqrReport *r);

/**
 * 1 if converged, 0 otherwise (including a null handle).
 *
 * # Safety
 * `r` must be null or come from this library.
 */
int eqr_report_converged(const EqrReport *r);

/**
 * NaN for a null handle.
 *
 * # Safety
 * `r` must be null or come from this library.
 */
double eqr_report_final_subdiag_norm(const EqrReport *r);

/**
 * Number of per-iteration trace records.
 *
 * # Safety
 * `r` must be null or come from this library.
 */
size_t eqr_report_trace_len(const EqrReport *r);

/**
 * Subdiagonal norm after each traced iteration, written to `norms`.
 *
 * # Safety
 * `r` must come from this library; `norms` must hold `capacity` doubles.
 */
EqrStatus eqr_report_trace_norms(const EqrReport *r, double *norms, size_t capacity);

/**
 * # Safety
 * `r` must be null or a handle from this library not already freed.
 */
void eqr_report_free(EqrReport *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EIGQR_H */
