#ifndef BCN_HYPER_H
#define BCN_HYPER_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/*
 Result codes. `BCN_STATUS_OK` is zero; every other value names a failure.
 */
typedef enum BcnStatus {
  BCN_STATUS_OK = 0,
  BCN_STATUS_NULL_POINTER = 1,
  BCN_STATUS_INVALID_UTF8 = 2,
  BCN_STATUS_POLE = 3,
  BCN_STATUS_DOMAIN = 4,
  BCN_STATUS_NON_CONVERGENCE = 5,
  BCN_STATUS_DEGENERATE_LAMBDA = 6,
  BCN_STATUS_CHAMBER = 7,
  BCN_STATUS_PARAMETER = 8,
  BCN_STATUS_SIZE = 9,
  BCN_STATUS_ZERO_DENOMINATOR = 10,
  BCN_STATUS_HALF_PLANE = 11,
  BCN_STATUS_SMALL_DENOMINATOR = 12,
  BCN_STATUS_TAIL_TOO_LARGE = 13,
  BCN_STATUS_SINGULARITY_TOO_CLOSE = 14,
  BCN_STATUS_STENCIL_BLOWUP = 15,
  BCN_STATUS_NOT_FINITE = 16,
  BCN_STATUS_PANIC = 17,
} BcnStatus;

/*
 Which function [`bcn_evaluate`] computes.
 */
typedef enum BcnTarget {
  /*
   The hypergeometric function F(λ, k; a_t).
   */
  BCN_TARGET_F = 0,
  /*
   The Harish-Chandra series Φ(λ, k; a_t).
   */
  BCN_TARGET_PHI = 1,
  /*
   The Θ-spherical function for Θ of type A_{n−1}; needs Re λ_j > 0.
   */
  BCN_TARGET_F_THETA = 2,
  /*
   The Bessel function of type BC_n.
   */
  BCN_TARGET_BESSEL_BC = 3,
} BcnTarget;

/*
 Opaque multiplicity data: rank n and (k_s, k_m, k_l).
 */
typedef struct BcnModel BcnModel;

/*
 Output of [`bcn_evaluate`].
 */
typedef struct BcnResult {
  double value_re;
  double value_im;
  double condition_estimate;
  bool degenerate_path;
} BcnResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Creates a model for rank `n` with multiplicities (k_s, k_m, k_l), where
 k_m is 0 or 1. On success `*out` owns a handle for [`bcn_model_free`].

 # Safety
 `out` must be null or valid for writing one pointer.
 */
enum BcnStatus bcn_model_new(size_t n, double k_s, uint8_t k_m, double k_l, struct BcnModel **out);

/*
 Releases a model. Null is ignored.

 # Safety
 `model` must be null or a handle from [`bcn_model_new`] not yet freed.
 */
void bcn_model_free(struct BcnModel *model);

/*
 Rank of the model, or 0 for a null handle.

 # Safety
 `model` must be null or a live handle.
 */
size_t bcn_model_rank(const struct BcnModel *model);

/*
 Evaluates `target` at λ = `lambda_re` + i `lambda_im` and the chamber
 point `t` (t_1 > … > t_n > 0). All three arrays hold `len` entries and
 `len` must equal the model rank; `lambda_im` may be null for real λ.

 # Safety
 `model` must be a live handle; the arrays must be valid for `len` reads
 (or null where permitted); `out` must be valid for one write.
 */
enum BcnStatus bcn_evaluate(const struct BcnModel *model,
                            enum BcnTarget target,
                            const double *lambda_re,
                            const double *lambda_im,
                            const double *t,
                            size_t len,
                            struct BcnResult *out);

/*
 The normalizing constant B of the determinant formula (k_m = 1 only).

 # Safety
 `model` must be a live handle; `re` and `im` valid for one write each.
 */
enum BcnStatus bcn_constant_b(const struct BcnModel *model, double *re, double *im);

/*
 Runs a named verification suite (for example "rank1-reduction") and
 stores whether every check passed. `n` restricts rank-dependent suites;
 pass 0 for the defaults.

 # Safety
 `name` must be a NUL-terminated string; `passed` valid for one write.
 */
enum BcnStatus bcn_run_suite(const char *name, size_t n, bool *passed);

/*
 Message for the most recent failure on the calling thread, or null if
 none. Valid until the next failing call on the same thread.
 */
const char *bcn_last_error_message(void);

/*
 Static name of a status code, such as "degenerate-lambda".
 */
const char *bcn_status_name(enum BcnStatus status);

/*
 Library version as a NUL-terminated string.
 */
const char *bcn_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BCN_HYPER_H */
