#ifndef SCHOTTKY_GEM_H
#define SCHOTTKY_GEM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum SgStatus {
  SG_STATUS_OK = 0,
  SG_STATUS_NULL_POINTER = 1,
  SG_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Parameters violate the Schottky conditions.
   */
  SG_STATUS_INVALID_SURFACE = 3,
  /**
   * A series, quadrature or linear solve failed its accuracy gate.
   */
  SG_STATUS_NUMERICAL = 4,
  /**
   * Evaluation point is a pole or too close to a limit point.
   */
  SG_STATUS_DOMAIN = 5,
  SG_STATUS_CONFIG = 6,
  SG_STATUS_BUFFER_TOO_SMALL = 7,
  SG_STATUS_PANIC = 99,
} SgStatus;

/**
 * Opaque surface handle.
 */
typedef struct SgSurface SgSurface;

typedef struct SgComplex {
  double re;
  double im;
} SgComplex;

/**
 * One handle: the two circle centers and the sewing parameter.
 */
typedef struct SgHandle {
  struct SgComplex w_plus;
  struct SgComplex w_minus;
  struct SgComplex rho;
} SgHandle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *sg_version(void);

/**
 * Copies the calling thread's last error message into `buf` (NUL
 * terminated, truncated to fit) and returns the full message length.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t sg_last_error_message(char *buf, size_t len);

/**
 * Checks the Schottky conditions without building a surface. `*valid` is
 * set to 1 or 0; a violation is not an error.
 *
 * # Safety
 * `handles` must point to `genus` handles; `valid` must be writable.
 */
enum SgStatus sg_validate(const struct SgHandle *handles, size_t genus, int32_t *valid);

/**
 * Builds a surface from `genus` handles, enumerating words up to length
 * `max_len`. The handle is written to `*out` and must be freed with
 * `sg_surface_free`.
 *
 * # Safety
 * `handles` must point to `genus` handles; `out` must be writable.
 */
enum SgStatus sg_surface_new(const struct SgHandle *handles,
                             size_t genus,
                             size_t max_len,
                             struct SgSurface **out);

/**
 * Builds a surface from a run config or bare surface JSON document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum SgStatus sg_surface_from_json(const char *json, struct SgSurface **out);

/**
 * Releases a surface. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void sg_surface_free(struct SgSurface *s);

/**
 * Genus of the surface, or 0 for a null handle.
 *
 * # Safety
 * `s` must be null or a live surface handle.
 */
size_t sg_surface_genus(const struct SgSurface *s);

/**
 * Period matrix, `genus × genus` row-major into `out`.
 *
 * # Safety
 * `s` must be a live handle; `out` must hold `len` values.
 */
enum SgStatus sg_period_matrix(const struct SgSurface *s, struct SgComplex *out, size_t len);

/**
 * Normalized holomorphic differentials `ν_1(x), …, ν_g(x)` into `out`.
 *
 * # Safety
 * `s` must be a live handle; `out` must hold `len` values.
 */
enum SgStatus sg_nu(const struct SgSurface *s,
                    struct SgComplex x,
                    struct SgComplex *out,
                    size_t len);

/**
 * Bers kernel of weight `n ≥ 2` at `(x, y)`.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum SgStatus sg_bers(const struct SgSurface *s,
                      size_t n,
                      struct SgComplex x,
                      struct SgComplex y,
                      struct SgComplex *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SCHOTTKY_GEM_H */
