#ifndef CIPC_H
#define CIPC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stdint.h>

// Result code of every fallible call.
typedef enum CipcStatus {
  CIPC_STATUS_OK = 0,
  CIPC_STATUS_NULL_POINTER = 1,
  CIPC_STATUS_INVALID_PARAMETER = 2,
  CIPC_STATUS_DOMAIN = 3,
  CIPC_STATUS_OVERFLOW = 4,
  CIPC_STATUS_NON_CONVERGENCE = 5,
  CIPC_STATUS_TOLERANCE = 6,
  CIPC_STATUS_BRACKET_NOT_FOUND = 7,
  CIPC_STATUS_EMPTY_FEASIBLE_SET = 8,
  CIPC_STATUS_PANIC = 9,
} CipcStatus;

typedef enum CipcScheme {
  CIPC_SCHEME_TRUNCATED = 0,
  CIPC_SCHEME_CONVENTIONAL = 1,
} CipcScheme;

typedef enum CipcHypothesis {
  // Alice is silent.
  CIPC_HYPOTHESIS_H0 = 0,
  // Alice transmits.
  CIPC_HYPOTHESIS_H1 = 1,
} CipcHypothesis;

// Opaque handle holding a validated design point and its environment.
typedef struct CipcModel CipcModel;

// Channel means, noise powers and the self-interference coefficient.
// The reverse channel `λ_ba` is taken equal to `lambda_ab`.
typedef struct CipcSystemParams {
  double lambda_ab;
  double lambda_aw;
  double lambda_bw;
  double lambda_bb;
  double sigma2_b;
  double sigma2_w;
  double phi;
} CipcSystemParams;

// A design point. Powers are linear; `p_a_max` is ignored by the
// conventional scheme.
typedef struct CipcSchemeConfig {
  enum CipcScheme scheme;
  double p_a_max;
  double q;
  double p_b_max;
  double rate;
  double epsilon;
} CipcSchemeConfig;

typedef struct CipcEctResult {
  double q_star;
  // The configured rate, or the optimal one when the rate was optimized.
  double rate;
  double ect;
  double xi_bar;
  double constraint_slack;
  // NaN when no bound applies (truncated scheme).
  double asymptotic_bound;
  // False when the rate cannot be decoded at `q_star` and `ect` is zero.
  bool decodable;
} CipcEctResult;

typedef struct CipcMcEstimate {
  double mean;
  double std_error;
  uint64_t n;
} CipcMcEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Validates the inputs and allocates a model.
//
// # Safety
// `params` and `config` must point to readable structs and `out` must be
// valid for writes. The handle written to `out` must be released with
// [`cipc_model_free`].
enum CipcStatus cipc_model_new(const struct CipcSystemParams *params,
                               const struct CipcSchemeConfig *config,
                               struct CipcModel **out);

// Releases a model. Null is ignored.
//
// # Safety
// `model` must be null or a handle from [`cipc_model_new`] that has not
// been freed.
void cipc_model_free(struct CipcModel *model);

// Message for the last failed call on this thread, or an empty string. The
// pointer stays valid until the next call into this library on the same
// thread.
const char *cipc_last_error_message(void);

// False alarm probability at threshold `tau` for warden gain `g_bw`.
//
// # Safety
// `m` must be a live model handle and `out` valid for writes.
enum CipcStatus cipc_false_alarm(const struct CipcModel *m, double g_bw, double tau, double *out);

// Miss detection probability at threshold `tau` for warden gain `g_bw`.
//
// # Safety
// `m` must be a live model handle and `out` valid for writes.
enum CipcStatus cipc_miss_detection(const struct CipcModel *m,
                                    double g_bw,
                                    double tau,
                                    double *out);

// The warden's optimal threshold.
//
// # Safety
// `m` must be a live model handle and `out` valid for writes.
enum CipcStatus cipc_optimal_threshold(const struct CipcModel *m, double g_bw, double *out);

// Minimum total detection error for warden gain `g_bw`.
//
// # Safety
// `m` must be a live model handle and `out` valid for writes.
enum CipcStatus cipc_xi_star(const struct CipcModel *m, double g_bw, double *out);

// Expected minimum detection error at received-power target `q`.
//
// # Safety
// `m` must be a live model handle and `out` valid for writes.
enum CipcStatus cipc_xi_bar(const struct CipcModel *m, double q, double *out);

// Outage probability at the model's design point.
//
// # Safety
// `m` must be a live model handle and `out` valid for writes.
enum CipcStatus cipc_outage_probability(const struct CipcModel *m, double *out);

// Effective covert throughput at target `q` and `rate`.
//
// # Safety
// `m` must be a live model handle and `out` valid for writes.
enum CipcStatus cipc_ect(const struct CipcModel *m, double q, double rate, double *out);

// Largest covert target of the conventional scheme.
//
// # Safety
// `m` must be a live model handle and `out` valid for writes.
enum CipcStatus cipc_solve_q_epsilon(const struct CipcModel *m, double *out);

// Throughput limit of the conventional scheme as the jamming budget grows.
//
// # Safety
// `m` must be a live model handle and `out` valid for writes.
enum CipcStatus cipc_asymptotic_bound(const struct CipcModel *m, double *out);

// Optimizes the target (and the rate when `optimize_rate` is set) under
// the covertness constraint.
//
// # Safety
// `m` must be a live model handle and `out` valid for writes.
enum CipcStatus cipc_optimize(const struct CipcModel *m,
                              bool optimize_rate,
                              struct CipcEctResult *out);

// Monte Carlo estimate of the false alarm (`H0`) or miss detection (`H1`)
// probability. Results depend only on `seed`, `stream` and `n_draws`.
//
// # Safety
// `m` must be a live model handle and `out` valid for writes.
enum CipcStatus cipc_simulate_detection(const struct CipcModel *m,
                                        double g_bw,
                                        double tau,
                                        enum CipcHypothesis hypothesis,
                                        uint64_t seed,
                                        uint64_t stream,
                                        uint64_t n_draws,
                                        struct CipcMcEstimate *out);

// Monte Carlo estimate of the outage probability.
//
// # Safety
// `m` must be a live model handle and `out` valid for writes.
enum CipcStatus cipc_simulate_outage(const struct CipcModel *m,
                                     uint64_t seed,
                                     uint64_t stream,
                                     uint64_t n_draws,
                                     struct CipcMcEstimate *out);

// Exponential integral `Ei(x)` for real `x != 0`.
//
// # Safety
// `out` must be valid for writes.
enum CipcStatus cipc_ei(double x, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CIPC_H */
