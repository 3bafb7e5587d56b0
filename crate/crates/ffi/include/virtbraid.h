#ifndef VIRTBRAID_H
#define VIRTBRAID_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum VbStatus {
  VB_STATUS_OK = 0,
  VB_STATUS_NULL_POINTER = 1,
  VB_STATUS_INVALID_UTF8 = 2,
  VB_STATUS_PARSE = 3,
  VB_STATUS_INVALID_ARGUMENT = 4,
  VB_STATUS_LIMIT = 5,
  VB_STATUS_NO_SOLUTION = 6,
  VB_STATUS_MATH = 7,
  VB_STATUS_PANIC = 8,
} VbStatus;

/**
 * A homomorphism to a symmetric group, tied to the presentation it was
 * checked against.
 */
typedef struct VbHom VbHom;

/**
 * A crystallographic quotient model.
 */
typedef struct VbModel VbModel;

/**
 * A finite presentation.
 */
typedef struct VbPresentation VbPresentation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, empty after success.
 * The pointer stays valid until the next library call on this thread.
 */
const char *vb_last_error(void);

/**
 * Library version as a static string.
 */
const char *vb_version(void);

/**
 * # Safety
 * `s` is null or was returned by this library and not yet freed.
 */
void vb_string_free(char *s);

/**
 * Catalog presentation, e.g. family "VB" with `n = 3`.
 *
 * # Safety
 * `family` is a NUL-terminated string; `result` is writable.
 */
enum VbStatus vb_presentation_catalog(const char *family,
                                      uint32_t n,
                                      struct VbPresentation **result);

/**
 * Presentation from DSL text.
 *
 * # Safety
 * `dsl` is a NUL-terminated string; `result` is writable.
 */
enum VbStatus vb_presentation_parse(const char *dsl, struct VbPresentation **result);

/**
 * # Safety
 * `p` is null or a live handle from this library.
 */
void vb_presentation_free(struct VbPresentation *p);

/**
 * # Safety
 * `p` is a live handle; `result` is writable.
 */
enum VbStatus vb_presentation_generator_count(const struct VbPresentation *p, uintptr_t *result);

/**
 * Number of conjugacy classes of homomorphisms to `S_degree` kept by
 * `filter` ("all", "nonabelian" or "surjective").
 *
 * # Safety
 * `p` is a live handle; `filter` is a NUL-terminated string; `result` is writable.
 */
enum VbStatus vb_hom_class_count(const struct VbPresentation *p,
                                 uint32_t degree,
                                 const char *filter,
                                 uintptr_t *result);

/**
 * Homomorphism from generator images in cycle notation separated by `;`,
 * e.g. "(1,2);(2,3);(1,2);(2,3)". Every relator is checked.
 *
 * # Safety
 * `p` is a live handle; `images` is a NUL-terminated string; `result` is writable.
 */
enum VbStatus vb_hom_from_images(const struct VbPresentation *p,
                                 uint32_t degree,
                                 const char *images,
                                 struct VbHom **result);

/**
 * Named catalog homomorphism such as "psi_2" on VB with `n = 3`.
 *
 * # Safety
 * `family` and `name` are NUL-terminated strings; `result` is writable.
 */
enum VbStatus vb_hom_named(const char *family, uint32_t n, const char *name, struct VbHom **result);

/**
 * # Safety
 * `h` is null or a live handle from this library.
 */
void vb_hom_free(struct VbHom *h);

/**
 * Abelian invariants of the kernel, GAP style (e.g. "[ 0, 0, 2, 2 ]").
 * The string is released with `vb_string_free`.
 *
 * # Safety
 * `p` and `h` are live handles, `h` built for `p`; `result` is writable.
 */
enum VbStatus vb_kernel_abelianization(const struct VbPresentation *p,
                                       const struct VbHom *h,
                                       char **result);

/**
 * Solves for a crystallographic model of a braid-like presentation on
 * `n` strands.
 *
 * # Safety
 * `p` is a live handle; `result` is writable.
 */
enum VbStatus vb_model_solve(const struct VbPresentation *p, uint32_t n, struct VbModel **result);

/**
 * # Safety
 * `m` is null or a live handle from this library.
 */
void vb_model_free(struct VbModel *m);

/**
 * Order of the image of `word`; 0 means infinite order.
 *
 * # Safety
 * `m` is a live handle; `word` is a NUL-terminated string; `result` is writable.
 */
enum VbStatus vb_model_element_order(const struct VbModel *m, const char *word, uint64_t *result);

/**
 * Reidemeister number of the lattice endomorphism given by the row-major
 * `dim x dim` matrix: "INFINITE" or a decimal count.
 *
 * # Safety
 * `entries` points to `dim * dim` readable values; `result` is writable.
 */
enum VbStatus vb_reidemeister_lattice(const int64_t *entries, uintptr_t dim, char **result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VIRTBRAID_H */
