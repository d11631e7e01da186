#ifndef TWOBRIDGE_H
#define TWOBRIDGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TbStatus {
  TB_STATUS_OK = 0,
  /**
   * τ and ω differ beyond tolerance, or a verified check failed. The report is still returned.
   */
  TB_STATUS_COMPARISON_FAILED = 1,
  TB_STATUS_NOT_HYPERBOLIC = 2,
  TB_STATUS_SOLVER_FAILURE = 3,
  TB_STATUS_IO_ERROR = 4,
  TB_STATUS_INVALID_ARGUMENT = 5,
  TB_STATUS_PANIC = 6,
} TbStatus;

/**
 * Opaque result of one computation.
 */
typedef struct TbReport TbReport;

typedef struct TbComplex {
  double re;
  double im;
} TbComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Computes τ and ω for the knot with the given twist vector.
 *
 * # Safety
 * `twists` must point to `len` readable integers; `out` must be valid for writing.
 */
enum TbStatus tb_compute_twists(const int64_t *twists,
                                size_t len,
                                uint64_t seed,
                                bool verify,
                                struct TbReport **out);

/**
 * Computes τ and ω for the knot with fraction p/q.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum TbStatus tb_compute_fraction(int64_t p,
                                  int64_t q,
                                  uint64_t seed,
                                  bool verify,
                                  struct TbReport **out);

/**
 * Computes τ from gluing data given as a NUL-terminated JSON document.
 *
 * # Safety
 * `json` must be a valid C string; `out` must be valid for writing.
 */
enum TbStatus tb_from_gluing_json(const char *json,
                                  uint64_t seed,
                                  bool verify,
                                  struct TbReport **out);

/**
 * The 1-loop invariant τ, defined up to sign.
 *
 * # Safety
 * `report` must come from this library; `out` must be valid for writing.
 */
enum TbStatus tb_report_tau(const struct TbReport *report, struct TbComplex *out);

/**
 * The Ohtsuki-Takata invariant ω. Absent for gluing-data reports.
 *
 * # Safety
 * `report` must come from this library; `out` must be valid for writing.
 */
enum TbStatus tb_report_omega(const struct TbReport *report, struct TbComplex *out);

/**
 * Hyperbolic volume of the geometric solution.
 *
 * # Safety
 * `report` must come from this library; `out` must be valid for writing.
 */
enum TbStatus tb_report_volume(const struct TbReport *report, double *out);

/**
 * Relative discrepancy min|τ ∓ ω|/|τ|. Absent for gluing-data reports.
 *
 * # Safety
 * `report` must come from this library; `out` must be valid for writing.
 */
enum TbStatus tb_report_discrepancy(const struct TbReport *report, double *out);

/**
 * The full report as JSON. Free with `tb_string_free`; null on bad input.
 *
 * # Safety
 * `report` must be null or come from this library.
 */
char *tb_report_json(const struct TbReport *report);

/**
 * # Safety
 * `s` must be null or a string returned by `tb_report_json`, freed once.
 */
void tb_string_free(char *s);

/**
 * # Safety
 * `report` must be null or a handle from this library, freed once.
 */
void tb_report_free(struct TbReport *report);

/**
 * Message for the last failure on this thread, or null. Valid until the next call that fails.
 */
const char *tb_last_error_message(void);

const char *tb_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TWOBRIDGE_H */
