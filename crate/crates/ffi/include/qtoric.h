#ifndef QTORIC_H
#define QTORIC_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Status codes. The nonzero values below 5 match the CLI exit codes.
 */
typedef enum QtStatus {
  QT_STATUS_OK = 0,
  QT_STATUS_MALFORMED = 2,
  QT_STATUS_INVALID_MATRIX = 3,
  QT_STATUS_DISAGREEMENT = 4,
  QT_STATUS_NULL_POINTER = 5,
  QT_STATUS_INVALID_ARGUMENT = 6,
  QT_STATUS_PANIC = 7,
} QtStatus;

/**
 * A simplicial complex.
 */
typedef struct QtComplex QtComplex;

/**
 * A characteristic matrix together with its polytope.
 */
typedef struct QtMatrix QtMatrix;

/**
 * The outcome of the decision procedure.
 */
typedef struct QtReport QtReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *qt_last_error_message(void);

/**
 * Parses `{"vertices": m, "facets": [[...], ...]}`.
 *
 * # Safety
 * `json` must be a valid C string and `out` a valid pointer.
 */
enum QtStatus qt_complex_from_json(const char *json, struct QtComplex **out);

/**
 * # Safety
 * `k` must be null or a handle from this library, not yet freed.
 */
void qt_complex_free(struct QtComplex *k);

/**
 * Writes the number of `∂Δ³` factors if the complex is a join of
 * tetrahedron boundaries, otherwise 0.
 *
 * # Safety
 * `k` must be a live handle and `out_factors` a valid pointer.
 */
enum QtStatus qt_complex_tetra_factors(const struct QtComplex *k, size_t *out_factors);

/**
 * Parses `{"n": .., "m": .., "entries": [[...]], "polytope": {...}}`.
 *
 * # Safety
 * `json` must be a valid C string and `out` a valid pointer.
 */
enum QtStatus qt_matrix_from_json(const char *json, struct QtMatrix **out);

/**
 * # Safety
 * `m` must be null or a handle from this library, not yet freed.
 */
void qt_matrix_free(struct QtMatrix *m);

/**
 * Writes whether every maximal-simplex determinant is ±1. An invalid
 * matrix is not an error; the failing simplex is left in the last-error
 * message.
 *
 * # Safety
 * `m` must be a live handle and `out_valid` a valid pointer.
 */
enum QtStatus qt_matrix_validate(const struct QtMatrix *m, bool *out_valid);

/**
 * `B(k,n)`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum QtStatus qt_family_generate(uint32_t k, size_t n, struct QtMatrix **out);

/**
 * Decides over the matrix's own dual complex.
 *
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
enum QtStatus qt_decide(const struct QtMatrix *m, struct QtReport **out);

/**
 * Decides over an explicitly given complex, which must equal the matrix's.
 *
 * # Safety
 * `k` and `m` must be live handles and `out` a valid pointer.
 */
enum QtStatus qt_decide_over(const struct QtComplex *k,
                             const struct QtMatrix *m,
                             struct QtReport **out);

/**
 * # Safety
 * `r` must be null or a handle from this library, not yet freed.
 */
void qt_report_free(struct QtReport *r);

/**
 * # Safety
 * `r` must be a live handle and `out` a valid pointer.
 */
enum QtStatus qt_report_is_commutative(const struct QtReport *r, bool *out);

/**
 * The report as JSON with sorted keys; free with [`qt_string_free`].
 *
 * # Safety
 * `r` must be a live handle and `out` a valid pointer.
 */
enum QtStatus qt_report_to_json(const struct QtReport *r, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void qt_string_free(char *s);

/**
 * Writes whether `H(k,n) ≅ H(l,n)`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum QtStatus qt_hkn_isomorphic(uint32_t k, uint32_t l, size_t n, bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QTORIC_H */
