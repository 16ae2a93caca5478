#ifndef QRS_FFI_H
#define QRS_FFI_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QrsAlgorithm {
  QRS_ALGORITHM_ADAPTIVE = 0,
  QRS_ALGORITHM_BASELINE = 1,
} QrsAlgorithm;

/**
 * Result of every fallible call.
 */
typedef enum QrsStatus {
  QRS_STATUS_OK = 0,
  QRS_STATUS_NULL_POINTER = 1,
  QRS_STATUS_INVALID_PARAM = 2,
  QRS_STATUS_IO = 3,
  QRS_STATUS_FORMAT = 4,
  QRS_STATUS_TOO_SHORT = 5,
  QRS_STATUS_SAMPLING_RATE = 6,
  QRS_STATUS_PANIC = 7,
} QrsStatus;

/**
 * Sorted 0-based beat sample indices.
 */
typedef struct QrsBeats QrsBeats;

/**
 * Detector parameters.
 */
typedef struct QrsParams QrsParams;

/**
 * A single-lead recording in physical units.
 */
typedef struct QrsRecord QrsRecord;

/**
 * Counts and percentages from matching predictions to annotations.
 */
typedef struct QrsMatchReport {
  size_t tp;
  size_t fp;
  size_t fn_;
  double se;
  double ppv;
  double f1;
} QrsMatchReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *qrs_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *qrs_version(void);

/**
 * Default parameters (adaptive detector). Never null.
 */
struct QrsParams *qrs_params_new(void);

/**
 * # Safety
 * `p` must come from [`qrs_params_new`] and not be used afterwards. Null is ignored.
 */
void qrs_params_free(struct QrsParams *p);

/**
 * # Safety
 * `p` must be a live params handle.
 */
enum QrsStatus qrs_params_set_algorithm(struct QrsParams *p, enum QrsAlgorithm algorithm);

/**
 * Sets a numeric field by name, e.g. `"alpha_factor"` or `"m_hi"`.
 *
 * Integer fields reject non-integral values. The full set is checked again
 * at detection time.
 *
 * # Safety
 * `p` must be a live params handle and `name` a NUL-terminated string.
 */
enum QrsStatus qrs_params_set(struct QrsParams *p, const char *name, double value);

/**
 * Copies `len` samples into a new record.
 *
 * # Safety
 * `samples` must point to `len` readable doubles (may be null when `len` is 0);
 * `out` must be writable.
 */
enum QrsStatus qrs_record_from_samples(const double *samples,
                                       size_t len,
                                       double fs,
                                       struct QrsRecord **out);

/**
 * Reads one CSV column. `fs <= 0` takes the rate from a `# fs=` header.
 *
 * # Safety
 * `path` must be NUL-terminated; `out` must be writable.
 */
enum QrsStatus qrs_record_from_csv(const char *path,
                                   size_t column,
                                   double fs,
                                   struct QrsRecord **out);

/**
 * # Safety
 * `r` must be a live record handle or null (returns 0).
 */
size_t qrs_record_len(const struct QrsRecord *r);

/**
 * # Safety
 * `r` must be a live record handle or null (returns 0).
 */
double qrs_record_fs(const struct QrsRecord *r);

/**
 * # Safety
 * `r` must come from a record constructor and not be used afterwards. Null is ignored.
 */
void qrs_record_free(struct QrsRecord *r);

/**
 * Runs the detector selected in `params` (null means defaults).
 *
 * # Safety
 * `record` must be a live record, `params` a live params handle or null,
 * and `out` writable.
 */
enum QrsStatus qrs_detect(const struct QrsRecord *record,
                          const struct QrsParams *params,
                          struct QrsBeats **out);

/**
 * Wraps `len` strictly increasing indices (for annotations).
 *
 * # Safety
 * `indices` must point to `len` readable values (may be null when `len` is 0);
 * `out` must be writable.
 */
enum QrsStatus qrs_beats_from_indices(const size_t *indices,
                                      size_t len,
                                      double fs,
                                      struct QrsBeats **out);

/**
 * # Safety
 * `b` must be a live beats handle or null (returns 0).
 */
size_t qrs_beats_len(const struct QrsBeats *b);

/**
 * Borrowed pointer to the indices, valid while `b` lives. Null when empty.
 *
 * # Safety
 * `b` must be a live beats handle or null.
 */
const size_t *qrs_beats_data(const struct QrsBeats *b);

/**
 * # Safety
 * `b` must come from a beats constructor and not be used afterwards. Null is ignored.
 */
void qrs_beats_free(struct QrsBeats *b);

/**
 * Matches predictions to annotations within `grace_ms` milliseconds.
 *
 * # Safety
 * `annotations` and `predictions` must be live beats handles; `out` writable.
 */
enum QrsStatus qrs_match(const struct QrsBeats *annotations,
                         const struct QrsBeats *predictions,
                         double grace_ms,
                         struct QrsMatchReport *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QRS_FFI_H */
