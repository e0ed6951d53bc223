#ifndef ASYMLOSS_H
#define ASYMLOSS_H

/* Generated by cbindgen from asymloss-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every API call.
typedef enum {
  // Success.
  ASYM_STATUS_OK = 0,
  // Input outside a function's domain (nonpositive shape, NaN, ...).
  ASYM_STATUS_DOMAIN = 1,
  // An iteration failed to converge.
  ASYM_STATUS_CONVERGENCE = 2,
  // An intermediate quantity exceeds the floating-point range.
  ASYM_STATUS_OVERFLOW = 3,
  // Residual moments incompatible with the error-distribution family.
  ASYM_STATUS_OUT_OF_FAMILY = 4,
  // Malformed input.
  ASYM_STATUS_INVALID_INPUT = 5,
  // Internal consistency failure.
  ASYM_STATUS_INTERNAL = 6,
  // A required pointer was null.
  ASYM_STATUS_NULL_POINTER = 7,
  // A panic was caught at the language boundary.
  ASYM_STATUS_PANIC = 8,
} AsymStatus;

// Opaque handle to a computed correction; read it through the
// `asym_correction_*` accessors and release it with
// [`asym_correction_free`].
typedef struct AsymCorrection AsymCorrection;

// Moment estimates from the Monte Carlo loss sampler.
typedef struct {
  uint64_t n;
  double mean;
  double variance;
  double mean_stderr;
  double variance_stderr;
  uint64_t seed;
} AsymLossStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static name of a status code, e.g. for error messages.
const char *asym_status_name(AsymStatus status);

// Solve for the optimal correction; on success `*out` owns a handle that
// must be released with [`asym_correction_free`].
//
// # Safety
// `out` must be a valid pointer to writable storage for one pointer.
AsymStatus asym_correction_compute(double a, double b, double k1, double k2, AsymCorrection **out);

// Release a correction handle; null is accepted and ignored.
//
// # Safety
// `handle` must come from [`asym_correction_compute`] and not be freed
// twice.
void asym_correction_free(AsymCorrection *handle);

// The optimal shift C; its sign follows sgn(k2 − k1). NaN on null.
//
// # Safety
// `handle` must be live (from [`asym_correction_compute`]) or null.
double asym_correction_shift(const AsymCorrection *handle);

// The transformed root x* = |C/b|^(1/a). NaN on null.
//
// # Safety
// `handle` must be live (from [`asym_correction_compute`]) or null.
double asym_correction_x_star(const AsymCorrection *handle);

// E[L(Z)], the expected loss before correcting. NaN on null.
//
// # Safety
// `handle` must be live (from [`asym_correction_compute`]) or null.
double asym_correction_expected_loss_at_zero(const AsymCorrection *handle);

// E[L(Z+C)], the minimized expected loss. NaN on null.
//
// # Safety
// `handle` must be live (from [`asym_correction_compute`]) or null.
double asym_correction_expected_loss_at_shift(const AsymCorrection *handle);

// Var[L(Z)]. NaN on null.
//
// # Safety
// `handle` must be live (from [`asym_correction_compute`]) or null.
double asym_correction_variance_at_zero(const AsymCorrection *handle);

// Var[L(Z+C)]; never exceeds the uncorrected variance. NaN on null.
//
// # Safety
// `handle` must be live (from [`asym_correction_compute`]) or null.
double asym_correction_variance_at_shift(const AsymCorrection *handle);

// E[L(Z+C)]/E[L(Z)] in (0, 1]; 1 exactly for symmetric slopes. NaN on
// null.
//
// # Safety
// `handle` must be live (from [`asym_correction_compute`]) or null.
double asym_correction_reduction_ratio(const AsymCorrection *handle);

// E[L(Z + c)] in closed form.
//
// # Safety
// `out` must point to writable storage for one double.
AsymStatus asym_expected_loss(double c, double a, double b, double k1, double k2, double *out);

// Var[L(Z + c)] in closed form.
//
// # Safety
// `out` must point to writable storage for one double.
AsymStatus asym_variance_loss(double c, double a, double b, double k1, double k2, double *out);

// d/dc E[L(Z + c)]; negative below the optimum, positive above.
//
// # Safety
// `out` must point to writable storage for one double.
AsymStatus asym_expected_loss_derivative(double c,
                                         double a,
                                         double b,
                                         double k1,
                                         double k2,
                                         double *out);

// Density of the error law at z.
//
// # Safety
// `out` must point to writable storage for one double.
AsymStatus asym_gnd_pdf(double z, double a, double b, double *out);

// Distribution function of the error law at z.
//
// # Safety
// `out` must point to writable storage for one double.
AsymStatus asym_gnd_cdf(double z, double a, double b, double *out);

// Fill `out` with `n` seeded draws from the error law; deterministic in
// (a, b, n, seed) and independent of thread count.
//
// # Safety
// `out` must point to writable storage for `n` doubles (it may be null
// only when `n` is 0).
AsymStatus asym_gnd_sample(double a, double b, uintptr_t n, uint64_t seed, double *out);

// Fit the error-law parameters to residuals by moment matching.
//
// # Safety
// `residuals` must point to `len` readable doubles; `a_out` and `b_out`
// must be writable.
AsymStatus asym_fit_moments(const double *residuals, uintptr_t len, double *a_out, double *b_out);

// Monte Carlo estimate of the shifted-loss mean and variance;
// deterministic in all inputs and independent of thread count.
//
// # Safety
// `out` must point to writable storage for one `AsymLossStats`.
AsymStatus asym_loss_stats(double c,
                           double a,
                           double b,
                           double k1,
                           double k2,
                           uintptr_t n,
                           uint64_t seed,
                           AsymLossStats *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ASYMLOSS_H */
