#ifndef GFLDPC_H
#define GFLDPC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Start point of the gradient-flow integration.
 */
typedef enum GfInit {
  GF_INIT_ZERO = 0,
  GF_INIT_SCALED_RECEIVED = 1,
} GfInit;

/**
 * Status codes returned by every fallible function.
 */
typedef enum GfStatus {
  GF_STATUS_OK = 0,
  GF_STATUS_NULL_POINTER = 1,
  GF_STATUS_INVALID_UTF8 = 2,
  GF_STATUS_PARSE = 3,
  GF_STATUS_INVALID_ARGUMENT = 4,
  GF_STATUS_LENGTH_MISMATCH = 5,
  GF_STATUS_NON_FINITE = 6,
  GF_STATUS_NUMERICAL = 7,
  GF_STATUS_PANIC = 8,
} GfStatus;

/**
 * Opaque parity-check matrix.
 */
typedef struct GfCode GfCode;

/**
 * Gradient-flow decoder parameters.
 */
typedef struct GfFlowParams {
  double alpha;
  double beta;
  double t_end;
  size_t steps;
  enum GfInit init;
  /**
   * Scale applied to `y` when `init` is `ScaledReceived`.
   */
  double delta;
  bool early_stop;
} GfFlowParams;

/**
 * Summary of one decode.
 */
typedef struct GfDecodeInfo {
  bool syndrome_ok;
  bool diverged;
  size_t iterations;
} GfDecodeInfo;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last error on this thread, or null. Valid until the next
 * failing call on the same thread.
 */
const char *gfldpc_last_error(void);

/**
 * BER defaults: alpha 1, beta 2, T 10, N 1000, zero start.
 */
struct GfFlowParams gfldpc_flow_params_default(void);

/**
 * Parses alist text into a new code handle.
 *
 * # Safety
 * `alist` must be a NUL-terminated string and `out` a valid pointer.
 */
enum GfStatus gfldpc_code_from_alist(const char *alist, struct GfCode **out);

/**
 * Releases a handle from [`gfldpc_code_from_alist`]. Null is ignored.
 *
 * # Safety
 * `code` must be null or a live handle not freed before.
 */
void gfldpc_code_free(struct GfCode *code);

/**
 * Code length, or 0 for a null handle.
 *
 * # Safety
 * `code` must be null or a live handle.
 */
size_t gfldpc_code_n(const struct GfCode *code);

/**
 * Number of checks, or 0 for a null handle.
 *
 * # Safety
 * `code` must be null or a live handle.
 */
size_t gfldpc_code_m(const struct GfCode *code);

/**
 * Noise standard deviation for an SNR in dB and a design rate.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum GfStatus gfldpc_sigma_from_snr(double snr_db, double rate, double *out);

/**
 * Total potential `|x - y|^2 / 2 + h(x)`.
 *
 * # Safety
 * `x` and `y` must point to `n` doubles; `out` must be valid.
 */
enum GfStatus gfldpc_total_energy(const struct GfCode *code,
                                  const struct GfFlowParams *params,
                                  const double *x,
                                  const double *y,
                                  size_t n,
                                  double *out);

/**
 * Gradient-flow decoding of `y`.
 *
 * `out_bits` (n bytes), `out_state` (n doubles) and `info` may each be null.
 *
 * # Safety
 * `y` must point to `n` doubles and non-null outputs must be large enough.
 */
enum GfStatus gfldpc_gf_decode(const struct GfCode *code,
                               const struct GfFlowParams *params,
                               const double *y,
                               size_t n,
                               uint8_t *out_bits,
                               double *out_state,
                               struct GfDecodeInfo *info);

/**
 * Sum-product decoding; `out_llr` receives posterior LLRs.
 *
 * # Safety
 * As for [`gfldpc_gf_decode`].
 */
enum GfStatus gfldpc_bp_decode(const struct GfCode *code,
                               const double *y,
                               size_t n,
                               double sigma,
                               size_t max_iterations,
                               uint8_t *out_bits,
                               double *out_llr,
                               struct GfDecodeInfo *info);

/**
 * Multi-bit GDBF decoding; `out_state` receives the final bipolar word.
 *
 * # Safety
 * As for [`gfldpc_gf_decode`].
 */
enum GfStatus gfldpc_gdbf_decode(const struct GfCode *code,
                                 const double *y,
                                 size_t n,
                                 size_t max_iterations,
                                 double theta,
                                 uint8_t *out_bits,
                                 double *out_state,
                                 struct GfDecodeInfo *info);

/**
 * Renders the analog dataflow graph as DOT. Free the result with
 * [`gfldpc_string_free`].
 *
 * # Safety
 * `code` must be a live handle and `out` a valid pointer.
 */
enum GfStatus gfldpc_circuit_dot(const struct GfCode *code,
                                 double alpha,
                                 double beta,
                                 double delta,
                                 char **out);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not freed before.
 */
void gfldpc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GFLDPC_H */
