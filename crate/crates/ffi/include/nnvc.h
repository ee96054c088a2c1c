#ifndef NNVC_H
#define NNVC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NnvcStatus {
  NNVC_STATUS_OK = 0,
  NNVC_STATUS_NULL_POINTER = 1,
  NNVC_STATUS_INVALID_ARGUMENT = 2,
  NNVC_STATUS_UNSUPPORTED = 3,
  NNVC_STATUS_NUMERICAL = 4,
  NNVC_STATUS_CONSTRUCTION = 5,
  NNVC_STATUS_SERIALIZATION = 6,
  NNVC_STATUS_BUFFER_TOO_SMALL = 7,
  NNVC_STATUS_PANIC = 8,
} NnvcStatus;

/**
 * Point set with its construction kind.
 */
typedef struct NnvcArrangement NnvcArrangement;

/**
 * Shattering certificate: one witness per labeling.
 */
typedef struct NnvcCertificate NnvcCertificate;

/**
 * Labeled prototypes of one 1NN classifier.
 */
typedef struct NnvcPrototypeSet NnvcPrototypeSet;

/**
 * All bounds at one (d, m).
 */
typedef struct NnvcBounds {
  uint64_t lower;
  double q;
  double upper_tight_real;
  uint64_t upper_tight;
  double upper_loose;
  double solver_residual;
} NnvcBounds;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next failing call on the same thread.
 */
const char *nnvc_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *nnvc_version(void);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum NnvcStatus nnvc_bounds(uint32_t d, uint64_t m, struct NnvcBounds *out);

/**
 * Lower branch of the Lambert W function on `[-1/e, 0)`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum NnvcStatus nnvc_lambert_wm1(double y, double *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum NnvcStatus nnvc_takacs_arrangement(size_t facets, double radius, struct NnvcArrangement **out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum NnvcStatus nnvc_odd_polygon_arrangement(size_t m, double radius, struct NnvcArrangement **out);

/**
 * Arrangement of `n` arbitrary points of dimension `dim`.
 *
 * # Safety
 * `coords` must point to `n * dim` doubles; `out` must be valid for writes.
 */
enum NnvcStatus nnvc_arrangement_from_points(const double *coords,
                                             size_t n,
                                             size_t dim,
                                             struct NnvcArrangement **out);

/**
 * Number of points; 0 for a null handle.
 *
 * # Safety
 * `arr` must be null or a live handle.
 */
size_t nnvc_arrangement_len(const struct NnvcArrangement *arr);

/**
 * Point dimension; 0 for a null handle.
 *
 * # Safety
 * `arr` must be null or a live handle.
 */
size_t nnvc_arrangement_dim(const struct NnvcArrangement *arr);

/**
 * Copies point `i` into `coords`, which holds `cap` doubles.
 *
 * # Safety
 * `arr` must be a live handle; `coords` must be valid for `cap` writes.
 */
enum NnvcStatus nnvc_arrangement_point(const struct NnvcArrangement *arr,
                                       size_t i,
                                       double *coords,
                                       size_t cap);

/**
 * # Safety
 * `arr` must be null or a handle not yet freed.
 */
void nnvc_arrangement_free(struct NnvcArrangement *arr);

/**
 * Prototype set from `m` points and labels (each +1 or -1).
 *
 * # Safety
 * `coords` must point to `m * dim` doubles, `labels` to `m` bytes; `out`
 * must be valid for writes.
 */
enum NnvcStatus nnvc_prototype_set_new(const double *coords,
                                       const int8_t *labels,
                                       size_t m,
                                       size_t dim,
                                       struct NnvcPrototypeSet **out);

/**
 * # Safety
 * `set` must be null or a live handle.
 */
size_t nnvc_prototype_set_len(const struct NnvcPrototypeSet *set);

/**
 * # Safety
 * `set` must be null or a live handle.
 */
size_t nnvc_prototype_set_dim(const struct NnvcPrototypeSet *set);

/**
 * Copies prototype `i` into `coords` (capacity `cap`) and its label into
 * `label`.
 *
 * # Safety
 * `set` must be a live handle; `coords` valid for `cap` writes; `label`
 * valid for one write.
 */
enum NnvcStatus nnvc_prototype_set_get(const struct NnvcPrototypeSet *set,
                                       size_t i,
                                       double *coords,
                                       size_t cap,
                                       int8_t *label);

/**
 * # Safety
 * `set` must be null or a handle not yet freed.
 */
void nnvc_prototype_set_free(struct NnvcPrototypeSet *set);

/**
 * Label (+1 or -1) of the nearest prototype to `x`, and its margin.
 *
 * # Safety
 * `set` must be a live handle; `x` must point to `dim` doubles; outputs
 * valid for writes.
 */
enum NnvcStatus nnvc_classify(const struct NnvcPrototypeSet *set,
                              const double *x,
                              size_t dim,
                              int8_t *label,
                              double *margin);

/**
 * Smallest signed margin of `set` on the points of `arr` under the
 * labeling `bits` (bit i set = point i labeled +1). Positive iff every
 * point is classified as labeled.
 *
 * # Safety
 * Handles must be live; `margin` valid for one write.
 */
enum NnvcStatus nnvc_labeling_margin(const struct NnvcPrototypeSet *set,
                                     const struct NnvcArrangement *arr,
                                     uint64_t bits,
                                     double *margin);

/**
 * Explicit witness for labeling `bits` of a Takacs or odd-polygon arrangement.
 *
 * # Safety
 * `arr` must be a live handle; `out` valid for writes.
 */
enum NnvcStatus nnvc_shatter(const struct NnvcArrangement *arr,
                             uint64_t bits,
                             struct NnvcPrototypeSet **out);

/**
 * Runs the explicit construction on every labeling of a Takacs or odd-polygon
 * arrangement. A certificate is produced even when some labeling fails;
 * check [`nnvc_certificate_verified`].
 *
 * # Safety
 * `arr` must be a live handle; `out` valid for writes.
 */
enum NnvcStatus nnvc_certify(const struct NnvcArrangement *arr,
                             double mu,
                             struct NnvcCertificate **out);

/**
 * # Safety
 * `cert` must be null or a live handle.
 */
bool nnvc_certificate_verified(const struct NnvcCertificate *cert);

/**
 * Recorded minimum margin; NaN for a null handle.
 *
 * # Safety
 * `cert` must be null or a live handle.
 */
double nnvc_certificate_min_margin(const struct NnvcCertificate *cert);

/**
 * # Safety
 * `cert` must be null or a live handle.
 */
size_t nnvc_certificate_witness_count(const struct NnvcCertificate *cert);

/**
 * Copy of the witness for labeling `bits`.
 *
 * # Safety
 * `cert` must be a live handle; `out` valid for writes.
 */
enum NnvcStatus nnvc_certificate_witness(const struct NnvcCertificate *cert,
                                         uint64_t bits,
                                         struct NnvcPrototypeSet **out);

/**
 * Re-checks the stored witnesses at margin `mu` (pass `0` or a negative
 * value for the recorded one). `first_failure` receives the first failing
 * bitmask when `verified` is false.
 *
 * # Safety
 * `cert` must be a live handle; outputs valid for writes.
 */
enum NnvcStatus nnvc_certificate_reverify(const struct NnvcCertificate *cert,
                                          double mu,
                                          bool *verified,
                                          uint64_t *first_failure);

/**
 * Writes the certificate JSON plus a NUL into `buf` (capacity `cap`).
 * `len` always receives the required size including the NUL; pass a null
 * `buf` to query it.
 *
 * # Safety
 * `cert` must be a live handle; `buf` null or valid for `cap` writes;
 * `len` valid for one write.
 */
enum NnvcStatus nnvc_certificate_to_json(const struct NnvcCertificate *cert,
                                         char *buf,
                                         size_t cap,
                                         size_t *len);

/**
 * Parses certificate JSON. The recorded verdict is kept as is; call
 * [`nnvc_certificate_reverify`] to check it.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` valid for writes.
 */
enum NnvcStatus nnvc_certificate_from_json(const char *json, struct NnvcCertificate **out);

/**
 * # Safety
 * `cert` must be null or a handle not yet freed.
 */
void nnvc_certificate_free(struct NnvcCertificate *cert);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NNVC_H */
