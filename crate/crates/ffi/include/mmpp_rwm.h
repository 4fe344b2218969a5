#ifndef MMPP_RWM_H
#define MMPP_RWM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum MmppStatus {
  MMPP_STATUS_OK = 0,
  MMPP_STATUS_NULL_POINTER = 1,
  MMPP_STATUS_INVALID_ARGUMENT = 2,
  MMPP_STATUS_SUPPORT_VIOLATION = 3,
  MMPP_STATUS_DEGENERATE_POINT = 4,
  MMPP_STATUS_UNDEFINED_VARIANCE = 5,
  MMPP_STATUS_BUFFER_TOO_SMALL = 6,
  MMPP_STATUS_INTERNAL = 7,
} MmppStatus;

/**
 * Output of one chain.
 */
typedef struct MmppChainHandle MmppChainHandle;

/**
 * Posterior of an MMPP given an event record and exponential priors.
 */
typedef struct MmppPosteriorHandle MmppPosteriorHandle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call on the same thread.
 */
const char *mmpp_last_error(void);

/**
 * Log-likelihood of `n_events` sorted event times in `[0, t_obs]` under a
 * `d`-state MMPP with intensities `psi` and `d * (d - 1)` row-major
 * off-diagonal rates `q`. Writes `-inf` when the likelihood underflows.
 *
 * # Safety
 * Pointers must be valid for the stated lengths.
 */
enum MmppStatus mmpp_log_likelihood(const double *psi,
                                    uintptr_t d,
                                    const double *q,
                                    double t_obs,
                                    const double *events,
                                    uintptr_t n_events,
                                    double *out_value);

/**
 * Simulates an MMPP over `[0, t_obs]` into `buf` (capacity `cap`). The
 * event count is written to `out_n` even when it exceeds `cap`, in which
 * case `BufferTooSmall` is returned and `buf` is left untouched.
 *
 * # Safety
 * Pointers must be valid for the stated lengths; `buf` may be null when `cap` is 0.
 */
enum MmppStatus mmpp_simulate(const double *psi,
                              uintptr_t d,
                              const double *q,
                              double t_obs,
                              uint64_t seed,
                              double *buf,
                              uintptr_t cap,
                              uintptr_t *out_n);

/**
 * Builds a posterior from an event record and `n_params = d * d` prior
 * means (intensities, then off-diagonal rates).
 *
 * # Safety
 * Pointers must be valid for the stated lengths.
 */
enum MmppStatus mmpp_posterior_new(double t_obs,
                                   const double *events,
                                   uintptr_t n_events,
                                   const double *prior_means,
                                   uintptr_t n_params,
                                   struct MmppPosteriorHandle **out_handle);

/**
 * # Safety
 * `handle` must come from [`mmpp_posterior_new`] and not be used afterwards.
 */
void mmpp_posterior_free(struct MmppPosteriorHandle *handle);

/**
 * Number of parameters of the posterior.
 *
 * # Safety
 * `handle` must be a live posterior handle.
 */
enum MmppStatus mmpp_posterior_dim(const struct MmppPosteriorHandle *handle, uintptr_t *out_dim);

/**
 * Log-posterior up to a constant; `-inf` outside the support.
 *
 * # Safety
 * `handle` must be live and `theta` valid for `n` reads.
 */
enum MmppStatus mmpp_posterior_log_density(const struct MmppPosteriorHandle *handle,
                                           const double *theta,
                                           uintptr_t n,
                                           double *out_value);

/**
 * Spherical Gaussian block random walk with the given scale.
 *
 * # Safety
 * `handle` must be live, `initial` valid for `n` reads.
 */
enum MmppStatus mmpp_run_block(const struct MmppPosteriorHandle *handle,
                               double scale,
                               uintptr_t iterations,
                               uintptr_t burn_in,
                               uint64_t seed,
                               const double *initial,
                               uintptr_t n,
                               struct MmppChainHandle **out_chain);

/**
 * Adaptive multiplicative block random walk with default constants.
 *
 * # Safety
 * `handle` must be live, `initial` valid for `n` reads.
 */
enum MmppStatus mmpp_run_adaptive(const struct MmppPosteriorHandle *handle,
                                  uintptr_t iterations,
                                  uintptr_t burn_in,
                                  uint64_t seed,
                                  const double *initial,
                                  uintptr_t n,
                                  struct MmppChainHandle **out_chain);

/**
 * # Safety
 * `chain` must come from a run function and not be used afterwards.
 */
void mmpp_chain_free(struct MmppChainHandle *chain);

/**
 * Rows (iterations, including burn-in) and columns (parameters).
 *
 * # Safety
 * `chain` must be live.
 */
enum MmppStatus mmpp_chain_shape(const struct MmppChainHandle *chain,
                                 uintptr_t *out_rows,
                                 uintptr_t *out_cols);

/**
 * Copies the row-major samples into `buf`, which must hold rows * cols values.
 *
 * # Safety
 * `chain` must be live and `buf` valid for `cap` writes.
 */
enum MmppStatus mmpp_chain_samples(const struct MmppChainHandle *chain, double *buf, uintptr_t cap);

/**
 * Fraction of accepted proposals.
 *
 * # Safety
 * `chain` must be live.
 */
enum MmppStatus mmpp_chain_acceptance(const struct MmppChainHandle *chain, double *out_rate);

/**
 * Integrated autocorrelation time of parameter `column` after burn-in.
 *
 * # Safety
 * `chain` must be live.
 */
enum MmppStatus mmpp_chain_act(const struct MmppChainHandle *chain,
                               uintptr_t column,
                               double *out_act);

/**
 * Limiting acceptance and speed of a random walk with rescaled scale `mu`
 * on a target of roughness `j`.
 *
 * # Safety
 * Out pointers must be valid.
 */
enum MmppStatus mmpp_diffusion_speed(double mu,
                                     double j,
                                     double *out_speed,
                                     double *out_acceptance);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MMPP_RWM_H */
