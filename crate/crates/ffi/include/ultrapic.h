#ifndef ULTRAPIC_H
#define ULTRAPIC_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stdint.h>

typedef enum UpStatus {
  UP_STATUS_OK = 0,
  UP_STATUS_NULL_POINTER = 1,
  UP_STATUS_INVALID_UTF8 = 2,
  UP_STATUS_PARSE_ERROR = 3,
  UP_STATUS_INVALID_ARGUMENT = 4,
  UP_STATUS_WINDOW_INSUFFICIENT = 5,
  UP_STATUS_NON_CONVERGENT = 6,
  UP_STATUS_POLE_AT_ORIGIN = 7,
  UP_STATUS_HYPOTHESIS_VIOLATED = 8,
  UP_STATUS_CONTRADICTION_DETECTED = 9,
  UP_STATUS_CONSTANT_FUNCTION = 10,
  UP_STATUS_PRECISION_EXHAUSTED = 11,
  UP_STATUS_UNSUPPORTED = 12,
  UP_STATUS_INTERNAL = 13,
} UpStatus;

typedef enum UpSingularityKind {
  UP_SINGULARITY_KIND_REMOVABLE = 0,
  UP_SINGULARITY_KIND_POLE = 1,
  UP_SINGULARITY_KIND_ESSENTIAL = 2,
} UpSingularityKind;

// Opaque series handle.
typedef struct UpSeries UpSeries;

// `order` is the pole order; 0 otherwise.
typedef struct UpSingularity {
  enum UpSingularityKind kind;
  uint64_t order;
} UpSingularity;

// Parse a series file's contents into a new handle stored in `*out`.
//
// # Safety
// `src` must be a valid NUL-terminated string and `out` a writable pointer.
enum UpStatus up_series_parse(const char *src, struct UpSeries **out);

// # Safety
// `series` must come from [`up_series_parse`] and not be freed twice.
void up_series_free(struct UpSeries *series);

// The series in file format; free with [`up_string_free`]. Null on error.
//
// # Safety
// `series` must be a live handle or null.
char *up_series_to_text(const struct UpSeries *series);

// `V_f(s)` as a newly allocated string (`"inf"` for the zero series).
//
// # Safety
// Pointers must be valid; `out` receives a string to free with
// [`up_string_free`].
enum UpStatus up_envelope_value(const struct UpSeries *series, const char *s, char **out);

// Zeros with valuation in `[from, to]`; null bounds are unbounded.
//
// # Safety
// Pointers must be valid (bounds may be null).
enum UpStatus up_zero_count(const struct UpSeries *series,
                            const char *from,
                            const char *to,
                            uint64_t *out);

// # Safety
// Pointers must be valid.
enum UpStatus up_classify(const struct UpSeries *series, struct UpSingularity *out);

// Extend across the puncture of the disc `v(z) >= radius_val`.
//
// # Safety
// Pointers must be valid.
enum UpStatus up_extend(const struct UpSeries *series,
                        const char *radius_val,
                        struct UpSingularity *out);

// Image disc: `*out_m` receives the lead exponent, `*out_delta_val` the
// valuation of the radius as a string to free with [`up_string_free`].
//
// # Safety
// Pointers must be valid.
enum UpStatus up_image_disc(const struct UpSeries *series,
                            const char *radius_val,
                            int64_t *out_m,
                            char **out_delta_val);

// # Safety
// Pointers must be valid.
enum UpStatus up_contains_value(const struct UpSeries *series,
                                const char *radius_val,
                                const char *w,
                                bool *out);

// Message for the last failed call on this thread, or null. Valid until
// the next call into this library on the same thread.
const char *up_last_error(void);

// # Safety
// `s` must come from this library and not be freed twice.
void up_string_free(char *s);

#endif  /* ULTRAPIC_H */
