/* C interface for the htype library. Generated; do not edit. */

#ifndef HTYPE_H
#define HTYPE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code for every fallible call.
 */
typedef enum HtStatus {
  /**
   * The call succeeded.
   */
  HT_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  HT_STATUS_NULL_POINTER = 1,
  /**
   * An argument was malformed: bad family name, non-finite time,
   * index out of range, or an overflowing buffer size.
   */
  HT_STATUS_INVALID_ARGUMENT = 2,
  /**
   * A vector or matrix argument has the wrong dimension.
   */
  HT_STATUS_DIMENSION_MISMATCH = 3,
  /**
   * The requested center dimension exceeds the Hurwitz-Radon bound.
   */
  HT_STATUS_ADMISSIBILITY = 4,
  /**
   * The metric signature is not usable: p + q must equal n with p <= q.
   */
  HT_STATUS_INVALID_SIGNATURE = 5,
  /**
   * The generator matrices failed the algebraic validation.
   */
  HT_STATUS_INVALID_GENERATORS = 6,
  /**
   * Spectral classification requires a nonzero center velocity.
   */
  HT_STATUS_ZERO_CENTER_VELOCITY = 7,
} HtStatus;

/**
 * Causal character of the initial horizontal velocity.
 */
typedef enum HtCausal {
  HT_CAUSAL_TIMELIKE = 0,
  HT_CAUSAL_SPACELIKE = 1,
  HT_CAUSAL_LIGHTLIKE = 2,
} HtCausal;

/**
 * Opaque handle to an H-type algebra.
 */
typedef struct HtAlgebra HtAlgebra;

/**
 * Opaque handle to a closed-form geodesic through the identity.
 */
typedef struct HtGeodesic HtGeodesic;

/**
 * Opaque handle to the spectral classification of eta j(u).
 */
typedef struct HtSpectrum HtSpectrum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code, as a NUL-terminated UTF-8 string.
 * Never null; unknown codes map to a placeholder message.
 */
const char *ht_status_message(enum HtStatus status);

/**
 * Creates an algebra from a builtin generator family.
 *
 * Accepted names are `"heisenberg"` and `"octonion"`, with or without a
 * `"builtin:"` prefix. `p` is the metric index. On success writes a new
 * handle to `out`; the caller releases it with [`ht_algebra_free`].
 *
 * # Safety
 *
 * `name` must point to a NUL-terminated string and `out` to a writable
 * pointer slot.
 */
enum HtStatus ht_algebra_new_builtin(const char *name, uintptr_t p, struct HtAlgebra **out);

/**
 * Creates an algebra from `m` generator matrices in one row-major buffer.
 *
 * `entries` holds `m * n * n` doubles: matrix 0 row by row, then matrix 1,
 * and so on. The matrices are validated; rejection yields
 * [`HtStatus::InvalidGenerators`]. On success writes a new handle to
 * `out`; the caller releases it with [`ht_algebra_free`].
 *
 * # Safety
 *
 * `entries` must point to `m * n * n` readable doubles and `out` to a
 * writable pointer slot.
 */
enum HtStatus ht_algebra_new(uintptr_t n,
                             uintptr_t m,
                             uintptr_t p,
                             const double *entries,
                             struct HtAlgebra **out);

/**
 * Releases an algebra handle. Null is a no-op.
 *
 * # Safety
 *
 * `alg` must be null or a handle from `ht_algebra_new_builtin` or
 * `ht_algebra_new` that has not been freed.
 */
void ht_algebra_free(struct HtAlgebra *alg);

/**
 * Horizontal dimension `n`; 0 for a null handle.
 *
 * # Safety
 *
 * `alg` must be null or a live algebra handle.
 */
uintptr_t ht_algebra_n(const struct HtAlgebra *alg);

/**
 * Center dimension `m`; 0 for a null handle.
 *
 * # Safety
 *
 * `alg` must be null or a live algebra handle.
 */
uintptr_t ht_algebra_m(const struct HtAlgebra *alg);

/**
 * Metric index `p`; 0 for a null handle.
 *
 * # Safety
 *
 * `alg` must be null or a live algebra handle.
 */
uintptr_t ht_algebra_p(const struct HtAlgebra *alg);

/**
 * Classifies the operator eta j(u) for a center direction `u`.
 *
 * `u` holds `u_len` doubles and must match the center dimension; a zero
 * direction yields [`HtStatus::ZeroCenterVelocity`]. On success writes a
 * new handle to `out`; the caller releases it with [`ht_spectrum_free`].
 *
 * # Safety
 *
 * `alg` must be a live algebra handle, `u` must point to `u_len`
 * readable doubles, and `out` to a writable pointer slot.
 */
enum HtStatus ht_spectrum_new(const struct HtAlgebra *alg,
                              const double *u,
                              uintptr_t u_len,
                              struct HtSpectrum **out);

/**
 * Releases a spectrum handle. Null is a no-op.
 *
 * # Safety
 *
 * `spectrum` must be null or a handle from `ht_spectrum_new` that has
 * not been freed.
 */
void ht_spectrum_free(struct HtSpectrum *spectrum);

/**
 * Block counts of the classification: `s` degenerate directions, `r`
 * paired rotation or hyperbolic blocks, `quartets` four-dimensional
 * spiral groups.
 *
 * # Safety
 *
 * `spectrum` must be a live spectrum handle; `s`, `r`, and `quartets`
 * must be writable.
 */
enum HtStatus ht_spectrum_counts(const struct HtSpectrum *spectrum,
                                 uintptr_t *s,
                                 uintptr_t *r,
                                 uintptr_t *quartets);

/**
 * Number of eigenvalues, equal to the horizontal dimension; 0 for a
 * null handle.
 *
 * # Safety
 *
 * `spectrum` must be null or a live spectrum handle.
 */
uintptr_t ht_spectrum_eigenvalue_count(const struct HtSpectrum *spectrum);

/**
 * Eigenvalue `index` of eta j(u), ordered as classified; writes the real
 * and imaginary parts.
 *
 * # Safety
 *
 * `spectrum` must be a live spectrum handle; `re` and `im` must be
 * writable.
 */
enum HtStatus ht_spectrum_eigenvalue(const struct HtSpectrum *spectrum,
                                     uintptr_t index,
                                     double *re,
                                     double *im);

/**
 * Parameters of spiral quartet `index`: eigenvalues are
 * `+-alpha +- i beta`.
 *
 * # Safety
 *
 * `spectrum` must be a live spectrum handle; `alpha` and `beta` must be
 * writable.
 */
enum HtStatus ht_spectrum_quartet(const struct HtSpectrum *spectrum,
                                  uintptr_t index,
                                  double *alpha,
                                  double *beta);

/**
 * Solves the geodesic through the identity, with initial horizontal
 * velocity `v0` (`v0_len` doubles, length `n`) and center velocity `u0`
 * (`u0_len` doubles, length `m`). On success writes a new handle to
 * `out`; the caller releases it with [`ht_geodesic_free`].
 *
 * # Safety
 *
 * `alg` must be a live algebra handle; `v0` and `u0` must point to the
 * stated number of readable doubles; `out` must be writable.
 */
enum HtStatus ht_geodesic_new(const struct HtAlgebra *alg,
                              const double *v0,
                              uintptr_t v0_len,
                              const double *u0,
                              uintptr_t u0_len,
                              struct HtGeodesic **out);

/**
 * Releases a geodesic handle. Null is a no-op.
 *
 * # Safety
 *
 * `geodesic` must be null or a handle from `ht_geodesic_new` that has
 * not been freed.
 */
void ht_geodesic_free(struct HtGeodesic *geodesic);

/**
 * Causal character of the geodesic's initial horizontal velocity.
 *
 * # Safety
 *
 * `geodesic` must be a live geodesic handle and `out` writable.
 */
enum HtStatus ht_geodesic_causal_type(const struct HtGeodesic *geodesic, enum HtCausal *out);

/**
 * Evaluates the geodesic at time `t`, filling caller-allocated buffers:
 * `v` and `dv` with `n` doubles each, `u` and `du` with `m` each.
 * Position and velocity are exact closed forms; `t` may be negative.
 *
 * # Safety
 *
 * `geodesic` must be a live geodesic handle; `v`, `u`, `dv`, and `du`
 * must point to writable buffers of the stated lengths.
 */
enum HtStatus ht_geodesic_eval(const struct HtGeodesic *geodesic,
                               double t,
                               double *v,
                               double *u,
                               double *dv,
                               double *du);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HTYPE_H */
