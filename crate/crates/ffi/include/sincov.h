#ifndef SINCOV_H
#define SINCOV_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SincovField {
  SINCOV_FIELD_REAL = 0,
  SINCOV_FIELD_COMPLEX = 1,
} SincovField;

typedef enum SincovStatus {
  SINCOV_STATUS_OK = 0,
  SINCOV_STATUS_NULL_POINTER = 1,
  SINCOV_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed document, bad table shape, non-finite value.
   */
  SINCOV_STATUS_INVALID_INPUT = 3,
  /**
   * Generator or vector parameters out of range.
   */
  SINCOV_STATUS_INVALID_PARAMETER = 4,
  /**
   * The operation is not defined for the kernel's value kind.
   */
  SINCOV_STATUS_UNSUPPORTED_KIND = 5,
  SINCOV_STATUS_UNKNOWN_LABEL = 6,
  /**
   * A required entry or slice is zero.
   */
  SINCOV_STATUS_VANISHING = 7,
  SINCOV_STATUS_PANIC = 8,
} SincovStatus;

/**
 * Opaque kernel handle.
 */
typedef struct SincovKernel SincovKernel;

typedef struct SincovDefect {
  double defect;
  double mean_defect;
  uint64_t triple_count;
  /**
   * Indices `(a, x, b)` of the first triple attaining the defect.
   */
  size_t argmax[3];
} SincovDefect;

typedef struct SincovMargin {
  double lhs;
  double rhs;
  /**
   * `rhs - lhs`
   */
  double margin;
} SincovMargin;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread; empty after a
 * success. Valid until the next library call on the same thread.
 */
const char *sincov_last_error(void);

/**
 * Frees a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void sincov_string_free(char *s);

/**
 * Frees a kernel. Null is ignored.
 *
 * # Safety
 * `k` must come from this library and not have been freed.
 */
void sincov_kernel_free(struct SincovKernel *k);

/**
 * Parses a kernel document (`labels`, `value_kind`, `entries`).
 *
 * # Safety
 * `json` must point to `len` readable bytes; `out` must be writable.
 */
enum SincovStatus sincov_kernel_load_json(const uint8_t *json,
                                          size_t len,
                                          struct SincovKernel **out);

/**
 * Serializes a kernel to its JSON document. Free with `sincov_string_free`.
 *
 * # Safety
 * `k` must be a live kernel; `out` must be writable.
 */
enum SincovStatus sincov_kernel_save_json(const struct SincovKernel *k, char **out);

/**
 * Number of points, or 0 for a null handle.
 *
 * # Safety
 * `k` must be null or a live kernel.
 */
size_t sincov_kernel_size(const struct SincovKernel *k);

/**
 * Builds a complex kernel from a row-major `n × n` table of real and
 * imaginary parts, labeled `0 .. n-1`.
 *
 * # Safety
 * `re` and `im` must each point to `n * n` doubles; `out` must be writable.
 */
enum SincovStatus sincov_kernel_from_complex(size_t n,
                                             const double *re,
                                             const double *im,
                                             struct SincovKernel **out);

/**
 * `F ≡ re + i·im` on `size` points.
 *
 * # Safety
 * `out` must be writable.
 */
enum SincovStatus sincov_generate_constant(double re,
                                           double im,
                                           size_t size,
                                           struct SincovKernel **out);

/**
 * `F(a, b) = a / (b + c)` on `{n, …, n²}`.
 *
 * # Safety
 * `out` must be writable.
 */
enum SincovStatus sincov_generate_e1(uint32_t n, double c, struct SincovKernel **out);

/**
 * `F(u, v) = u / v` on the given nonzero samples.
 *
 * # Safety
 * `samples` must point to `len` doubles; `out` must be writable.
 */
enum SincovStatus sincov_generate_ratio(const double *samples,
                                        size_t len,
                                        struct SincovKernel **out);

/**
 * `F(u, v) = u / v · (1 + δ(u, v))` with seeded `δ` uniform on `[-eps, eps]`.
 *
 * # Safety
 * `samples` must point to `len` doubles; `out` must be writable.
 */
enum SincovStatus sincov_generate_perturbed_ratio(const double *samples,
                                                  size_t len,
                                                  double eps,
                                                  uint64_t seed,
                                                  struct SincovKernel **out);

/**
 * `F(u, v) = diag(u / v, c0)`, a 2×2 matrix-valued kernel.
 *
 * # Safety
 * `samples` must point to `len` doubles; `out` must be writable.
 */
enum SincovStatus sincov_generate_mat2_ratio(double c0,
                                             const double *samples,
                                             size_t len,
                                             struct SincovKernel **out);

/**
 * Multiplicative defect over all triples.
 *
 * # Safety
 * `k` must be a live kernel; `out` must be writable.
 */
enum SincovStatus sincov_defect(const struct SincovKernel *k, struct SincovDefect *out);

/**
 * Factorization report as JSON. A null `reference` selects the first label.
 *
 * # Safety
 * `k` must be a live kernel; `reference` null or a C string; `out` writable.
 */
enum SincovStatus sincov_factorize_json(const struct SincovKernel *k,
                                        const char *reference,
                                        char **out);

/**
 * Runs every applicable bound check and writes the report as JSON.
 * `*pass` receives whether all checks hold. A null `reference` selects the
 * first label; `base_tol` is scaled by `max(1, sup|F|)²`.
 *
 * # Safety
 * `k` must be a live kernel; `reference` null or a C string; outputs writable.
 */
enum SincovStatus sincov_check_json(const struct SincovKernel *k,
                                    const char *reference,
                                    double base_tol,
                                    bool *pass,
                                    char **out);

/**
 * Seeded random sweep of the inner product inequalities, as JSON.
 *
 * # Safety
 * `out` must be writable.
 */
enum SincovStatus sincov_sweep_json(size_t dim,
                                    uint64_t count,
                                    enum SincovField f,
                                    uint64_t seed,
                                    char **out);

/**
 * `|⟨a|x⟩⟨x|b⟩ − ⟨a|b⟩‖x‖²/2| ≤ ‖a‖‖b‖‖x‖²/2`. Each vector holds `2 * dim`
 * doubles, interleaved real and imaginary parts.
 *
 * # Safety
 * `a`, `b`, `x` must each point to `2 * dim` doubles; `out` writable.
 */
enum SincovStatus sincov_richard_margin(enum SincovField f,
                                        size_t dim,
                                        const double *a,
                                        const double *b,
                                        const double *x,
                                        struct SincovMargin *out);

/**
 * `|⟨a|x⟩⟨x|b⟩| ≤ ½(‖a‖‖b‖ + |⟨a|b⟩|)‖x‖²`, same layout as
 * `sincov_richard_margin`.
 *
 * # Safety
 * `a`, `b`, `x` must each point to `2 * dim` doubles; `out` writable.
 */
enum SincovStatus sincov_buzano_margin(enum SincovField f,
                                       size_t dim,
                                       const double *a,
                                       const double *b,
                                       const double *x,
                                       struct SincovMargin *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SINCOV_H */
