#ifndef BCGO_H
#define BCGO_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
enum BcgoStatus
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  BcgoStatus_Ok = 0,
  BcgoStatus_NullPointer = 1,
  BcgoStatus_InvalidArgument = 2,
  BcgoStatus_Config = 3,
  BcgoStatus_Precondition = 4,
  BcgoStatus_Convergence = 5,
  BcgoStatus_Io = 6,
  BcgoStatus_Panic = 7,
};
#ifndef __cplusplus
typedef int32_t BcgoStatus;
#endif // __cplusplus

/**
 * Parsed configuration.
 */
typedef struct BcgoConfig BcgoConfig;

/**
 * A potential evaluated pointwise.
 */
typedef struct BcgoPotential BcgoPotential;

/**
 * A converged CGO solution with a fast evaluator.
 */
typedef struct BcgoSolution BcgoSolution;

/**
 * The rows of a stability sweep.
 */
typedef struct BcgoSweep BcgoSweep;

/**
 * Derived parameters for one `(k, δ)` pair.
 */
typedef struct BcgoSchedule {
  double k;
  double delta;
  double a;
  double tau;
  double rho;
  double alpha;
} BcgoSchedule;

/**
 * One sweep row.
 */
typedef struct BcgoRecord {
  struct BcgoSchedule schedule;
  double err_hminus1;
  double bound_value;
  double runtime_s;
  size_t nodes;
} BcgoRecord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or an empty string.
 * The pointer stays valid until the next call into the library.
 */
const char *bcgo_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *bcgo_version(void);

/**
 * Default configuration.
 *
 * # Safety
 * `out` must be writable.
 */
BcgoStatus bcgo_config_default(struct BcgoConfig **out);

/**
 * Parses and validates a TOML configuration.
 *
 * # Safety
 * `text` must be NUL-terminated and `out` writable.
 */
BcgoStatus bcgo_config_from_toml(const char *text, struct BcgoConfig **out);

/**
 * Reads a TOML configuration file.
 *
 * # Safety
 * `path` must be NUL-terminated and `out` writable.
 */
BcgoStatus bcgo_config_load(const char *path, struct BcgoConfig **out);

/**
 * # Safety
 * `cfg` must come from this library or be null.
 */
void bcgo_config_free(struct BcgoConfig *cfg);

/**
 * Potential `which` (1 or 2) of a configuration.
 *
 * # Safety
 * `cfg` must be a live handle and `out` writable.
 */
BcgoStatus bcgo_potential_from_config(const struct BcgoConfig *cfg,
                                      uint32_t which,
                                      struct BcgoPotential **out);

/**
 * # Safety
 * `q` must be a live handle.
 */
size_t bcgo_potential_dim(const struct BcgoPotential *q);

/**
 * Evaluates the potential at `x[0..len]`.
 *
 * # Safety
 * `x` must hold `len` values and `out` be writable.
 */
BcgoStatus bcgo_potential_eval(const struct BcgoPotential *q,
                               const double *x,
                               size_t len,
                               double *out);

/**
 * # Safety
 * `q` must come from this library or be null.
 */
void bcgo_potential_free(struct BcgoPotential *q);

/**
 * Builds the CGO solution for the even extension of potential `which`
 * with `ζ` along the last axis, `|Re ζ|² − |Im ζ|² = k²` and `|Im ζ| = a`.
 * `modes == 0` keeps the configured resolution.
 *
 * # Safety
 * `cfg` must be a live handle and `out` writable.
 */
BcgoStatus bcgo_cgo_build(const struct BcgoConfig *cfg,
                          uint32_t which,
                          double k,
                          double a,
                          size_t modes,
                          struct BcgoSolution **out);

/**
 * # Safety
 * `sol` must be a live handle.
 */
size_t bcgo_solution_dim(const struct BcgoSolution *sol);

/**
 * # Safety
 * `sol` must be a live handle.
 */
size_t bcgo_solution_iterations(const struct BcgoSolution *sol);

/**
 * Normalized remainder norm, or NaN for a null handle.
 *
 * # Safety
 * `sol` must be a live handle.
 */
double bcgo_solution_remainder_norm(const struct BcgoSolution *sol);

/**
 * Certified remainder bound, or NaN for a null handle.
 *
 * # Safety
 * `sol` must be a live handle.
 */
double bcgo_solution_certified_bound(const struct BcgoSolution *sol);

/**
 * Evaluates `u(x) = e^{iζ·x}(1 + r(x))`.
 *
 * # Safety
 * `x` must hold `len` values; `re` and `im` must be writable.
 */
BcgoStatus bcgo_solution_eval(const struct BcgoSolution *sol,
                              const double *x,
                              size_t len,
                              double *re,
                              double *im);

/**
 * # Safety
 * `sol` must come from this library or be null.
 */
void bcgo_solution_free(struct BcgoSolution *sol);

/**
 * Parameter schedule for `(k, δ)`.
 *
 * # Safety
 * `out` must be writable.
 */
BcgoStatus bcgo_schedule(double k,
                         double delta,
                         double s,
                         size_t n,
                         double m,
                         double r,
                         double c0,
                         struct BcgoSchedule *out);

/**
 * Estimates `F(q₁ − q₂)` of the even extensions at `xi[0..len]`.
 * `boundary` selects the Cauchy-data pairing instead of the volume one.
 *
 * # Safety
 * `cfg` must be a live handle, `xi` must hold `len` values, `re` and `im`
 * must be writable.
 */
BcgoStatus bcgo_estimate_fourier(const struct BcgoConfig *cfg,
                                 const double *xi,
                                 size_t len,
                                 double k,
                                 double a,
                                 bool boundary,
                                 double *re,
                                 double *im);

/**
 * Runs the configured sweep. Rows that fail are dropped; the call fails
 * only if none succeed. With `write_files` the CSV and plot are written
 * to the configured output directory.
 *
 * # Safety
 * `cfg` must be a live handle and `out` writable.
 */
BcgoStatus bcgo_sweep_run(const struct BcgoConfig *cfg, bool write_files, struct BcgoSweep **out);

/**
 * # Safety
 * `sweep` must be a live handle.
 */
size_t bcgo_sweep_len(const struct BcgoSweep *sweep);

/**
 * Copies row `index` into `out`.
 *
 * # Safety
 * `sweep` must be a live handle and `out` writable.
 */
BcgoStatus bcgo_sweep_record(const struct BcgoSweep *sweep, size_t index, struct BcgoRecord *out);

/**
 * # Safety
 * `sweep` must come from this library or be null.
 */
void bcgo_sweep_free(struct BcgoSweep *sweep);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BCGO_H */
