/* C interface to the riesz-core numerical engine. Generated by cbindgen; do not edit. */

#ifndef RIESZ_H
#define RIESZ_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a call across the C boundary.
 */
typedef enum RieszStatus {
  /**
   * The call succeeded and all outputs are valid.
   */
  RIESZ_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  RIESZ_STATUS_NULL_POINTER = 1,
  /**
   * An argument was outside the function's domain.
   */
  RIESZ_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The computation itself failed (budget, pole, divergence, ...).
   */
  RIESZ_STATUS_EVAL_FAILURE = 3,
  /**
   * An internal panic was caught at the boundary.
   */
  RIESZ_STATUS_PANIC = 4,
} RieszStatus;

/**
 * Opaque handle to an analytic target (a Dirichlet series together
 * with its known closed forms). Create with `riesz_target_builtin`
 * or `riesz_target_polynomial`, release with `riesz_target_free`.
 */
typedef struct RieszTarget RieszTarget;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version of the underlying engine as a static C string.
 */
const char *riesz_core_version(void);

/**
 * Create a built-in target by name. Known names: "const1",
 * "zeta-line", "eta", "taylor-l2".
 *
 * # Safety
 *
 * `name` must point to a valid NUL-terminated string and `out` to a
 * writable pointer slot. On success `*out` owns the handle and must
 * be released with `riesz_target_free`.
 */
enum RieszStatus riesz_target_builtin(const char *name, struct RieszTarget **out);

/**
 * Create a Dirichlet-polynomial target from `len` frequencies and
 * complex coefficients (split into real and imaginary arrays).
 * Frequencies must be non-negative and strictly increasing.
 *
 * # Safety
 *
 * `freqs`, `coeff_re`, and `coeff_im` must each point to `len`
 * readable doubles, and `out` to a writable pointer slot. On success
 * `*out` owns the handle and must be released with
 * `riesz_target_free`.
 */
enum RieszStatus riesz_target_polynomial(const double *freqs,
                                         const double *coeff_re,
                                         const double *coeff_im,
                                         size_t len,
                                         struct RieszTarget **out);

/**
 * Release a target handle. Null is a no-op.
 *
 * # Safety
 *
 * `target` must be null or a handle obtained from a `riesz_target_*`
 * constructor that has not been freed yet.
 */
void riesz_target_free(struct RieszTarget *target);

/**
 * Riesz mean of order `k` at cutoff `x`, evaluated at the complex
 * point `s_re + i s_im`.
 *
 * # Safety
 *
 * `target` must be a live handle; `out_re` and `out_im` must be
 * writable.
 */
enum RieszStatus riesz_mean_eval(const struct RieszTarget *target,
                                 double k,
                                 double x,
                                 double s_re,
                                 double s_im,
                                 double *out_re,
                                 double *out_im);

/**
 * Riesz mean of order `k` at cutoff `x` recovered from the boundary
 * Perron integral at ordinate `tau`, with the default quadrature.
 * `out_err` receives the quadrature error estimate.
 *
 * # Safety
 *
 * `target` must be a live handle; `out_re`, `out_im`, and `out_err`
 * must be writable.
 */
enum RieszStatus riesz_perron_boundary(const struct RieszTarget *target,
                                       double k,
                                       double x,
                                       double tau,
                                       double *out_re,
                                       double *out_im,
                                       double *out_err);

/**
 * Bare Riesz summability kernel of order `k > 0` at `y`.
 *
 * # Safety
 *
 * `out_re` and `out_im` must be writable.
 */
enum RieszStatus riesz_kernel_eval(double k, double y, double *out_re, double *out_im);

/**
 * Poisson kernel for the half-plane at abscissa `u > 0` and offset
 * `t`.
 *
 * # Safety
 *
 * `out` must be writable.
 */
enum RieszStatus riesz_poisson_eval(double u, double t, double *out);

/**
 * Decay envelope of the composite smoothed kernel with orders
 * `k > ell >= 0` at height `x > 0`, evaluated at `y`.
 *
 * # Safety
 *
 * `out` must be writable.
 */
enum RieszStatus riesz_envelope_eval(double k, double ell, double x, double y, double *out);

/**
 * Composite smoothed kernel with orders `k > ell >= 0` at height
 * `x > 0`, evaluated at `y` with the default quadrature. `out_err`
 * receives the quadrature error estimate.
 *
 * # Safety
 *
 * `out_re`, `out_im`, and `out_err` must be writable.
 */
enum RieszStatus riesz_smoothed_kernel_eval(double k,
                                            double ell,
                                            double x,
                                            double y,
                                            double *out_re,
                                            double *out_im,
                                            double *out_err);

/**
 * Riemann zeta at `s_re + i s_im`, refusing points within 1e-6 of
 * the pole at 1.
 *
 * # Safety
 *
 * `out_re` and `out_im` must be writable.
 */
enum RieszStatus riesz_zeta(double s_re, double s_im, double *out_re, double *out_im);

/**
 * Dirichlet eta at `s_re + i s_im` (entire, no guard needed).
 *
 * # Safety
 *
 * `out_re` and `out_im` must be writable.
 */
enum RieszStatus riesz_eta(double s_re, double s_im, double *out_re, double *out_im);

/**
 * Gamma function on the positive real axis.
 *
 * # Safety
 *
 * `out` must be writable.
 */
enum RieszStatus riesz_gamma(double x, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RIESZ_H */
