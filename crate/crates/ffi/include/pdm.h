#ifndef PDM_H
#define PDM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PdmMassKind {
  PDM_MASS_KIND_RATIONAL2 = 0,
  PDM_MASS_KIND_RATIONAL4 = 1,
  PDM_MASS_KIND_CONSTANT = 2,
} PdmMassKind;

typedef enum PdmStatus {
  PDM_STATUS_OK = 0,
  PDM_STATUS_INVALID_INPUT = 1,
  PDM_STATUS_NUMERIC_FAILURE = 2,
  PDM_STATUS_UNSUPPORTED = 3,
  PDM_STATUS_DOMAIN_MISMATCH = 4,
  PDM_STATUS_NOT_CONVERGED = 5,
  PDM_STATUS_IO = 6,
  PDM_STATUS_NULL_POINTER = 7,
  PDM_STATUS_BUFFER_TOO_SMALL = 8,
  PDM_STATUS_PANIC = 9,
} PdmStatus;

typedef enum PdmTargetKind {
  PDM_TARGET_KIND_HARMONIC = 0,
  PDM_TARGET_KIND_MORSE = 1,
  PDM_TARGET_KIND_SOLITON = 2,
  PDM_TARGET_KIND_SEXTIC = 3,
} PdmTargetKind;

/**
 * Opaque problem handle.
 */
typedef struct PdmProblem PdmProblem;

/**
 * `alpha` is used by the rational kinds, `value` by `Constant`.
 */
typedef struct PdmMassSpec {
  enum PdmMassKind kind;
  double alpha;
  double value;
} PdmMassSpec;

/**
 * `lambda` is used by Morse and soliton (NaN selects the default), `j` by
 * the sextic target.
 */
typedef struct PdmTargetSpec {
  enum PdmTargetKind kind;
  double lambda;
  double j;
} PdmTargetSpec;

/**
 * One solved level. `exact` and `abs_error` are NaN when no exact value is known.
 */
typedef struct PdmLevel {
  size_t n;
  double numeric;
  double extrapolated;
  double exact;
  double abs_error;
  bool bound;
} PdmLevel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *pdm_version(void);

/**
 * Message for the last failed call on this thread. Valid until the next
 * failing call on the same thread. Never null.
 */
const char *pdm_last_error_message(void);

/**
 * Evaluate `m`, `m'`, `m''` at `x`. All outputs optional.
 *
 * # Safety
 * `spec` must point to a valid `PdmMassSpec`; outputs must be null or writable.
 */
enum PdmStatus pdm_mass_evaluate(const struct PdmMassSpec *spec,
                                 double x,
                                 double *out_m,
                                 double *out_dm,
                                 double *out_d2m);

/**
 * Gauge potential `V₁(x)` of a mass profile.
 *
 * # Safety
 * `spec` must point to a valid `PdmMassSpec`; `out` must be writable.
 */
enum PdmStatus pdm_gauge_potential(const struct PdmMassSpec *spec, double x, double *out);

/**
 * Build a problem. On success `*out` receives a handle owned by the caller.
 *
 * # Safety
 * `mass` and `target` must point to valid specs; `out` must be writable.
 */
enum PdmStatus pdm_problem_new(const struct PdmMassSpec *mass,
                               const struct PdmTargetSpec *target,
                               struct PdmProblem **out);

/**
 * Release a handle. Null is ignored.
 *
 * # Safety
 * `problem` must be null or a handle from `pdm_problem_new` not yet freed.
 */
void pdm_problem_free(struct PdmProblem *problem);

/**
 * `V(x)`, `V₁(x)`, `x̄(x)` and `V₂(x̄)`. All outputs optional.
 *
 * # Safety
 * `problem` must be a live handle; outputs must be null or writable.
 */
enum PdmStatus pdm_problem_components(const struct PdmProblem *problem,
                                      double x,
                                      double *out_v,
                                      double *out_v1,
                                      double *out_xbar,
                                      double *out_v2);

/**
 * `x̄(x)`.
 *
 * # Safety
 * `problem` must be a live handle; `out` must be writable.
 */
enum PdmStatus pdm_problem_forward(const struct PdmProblem *problem, double x, double *out);

/**
 * `x` such that `x̄(x) = xbar`.
 *
 * # Safety
 * `problem` must be a live handle; `out` must be writable.
 */
enum PdmStatus pdm_problem_inverse(const struct PdmProblem *problem, double xbar, double *out);

/**
 * Default Dirichlet domain in `x` for this problem.
 *
 * # Safety
 * `problem` must be a live handle; outputs must be writable.
 */
enum PdmStatus pdm_problem_default_domain(const struct PdmProblem *problem,
                                          double *out_min,
                                          double *out_max);

/**
 * Converged lowest `levels` eigenvalues. Pass NaN for `x_min` and `x_max` to
 * use the default domain and 0 for `nodes` to use the default node count.
 * `out_levels` must hold `levels` entries. On `PDM_STATUS_NOT_CONVERGED` the
 * levels of the last attempt are still written.
 *
 * # Safety
 * `problem` must be a live handle; `out_levels` must be writable for
 * `levels` elements; `out_converged` must be null or writable.
 */
enum PdmStatus pdm_problem_spectrum(const struct PdmProblem *problem,
                                    double x_min,
                                    double x_max,
                                    size_t nodes,
                                    size_t levels,
                                    double tol,
                                    struct PdmLevel *out_levels,
                                    bool *out_converged);

/**
 * Analytically known levels of a target, ascending. Writes at most
 * `capacity` energies and the total count to `out_len`.
 *
 * # Safety
 * `target` must be valid; `out_energies` must be writable for `capacity`
 * elements; `out_len` must be writable; `out_partial` may be null.
 */
enum PdmStatus pdm_exact_spectrum(const struct PdmTargetSpec *target,
                                  size_t max_levels,
                                  double *out_energies,
                                  size_t capacity,
                                  size_t *out_len,
                                  bool *out_partial);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PDM_H */
