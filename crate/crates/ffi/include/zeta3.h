#ifndef ZETA3_H
#define ZETA3_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum Zeta3Status {
  ZETA3_STATUS_OK = 0,
  ZETA3_STATUS_NULL_POINTER = 1,
  ZETA3_STATUS_INVALID_ARGUMENT = 2,
  ZETA3_STATUS_DOMAIN = 3,
  ZETA3_STATUS_SEARCH_EXHAUSTED = 4,
  ZETA3_STATUS_VERIFICATION_FAILED = 5,
  ZETA3_STATUS_INTERNAL = 6,
} Zeta3Status;

typedef struct Zeta3Certificate Zeta3Certificate;

/**
 * Shifted Legendre polynomial.
 */
typedef struct Zeta3Polynomial Zeta3Polynomial;

/**
 * The record (A_n, B_n, d_n) with an enclosure of u_n.
 */
typedef struct Zeta3Record Zeta3Record;

typedef struct Zeta3Quadrature {
  double value;
  double error_estimate;
  uint64_t evaluations;
  uint32_t level;
} Zeta3Quadrature;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or null. Valid until the
 * next call into this library from the same thread.
 */
const char *zeta3_last_error_message(void);

/**
 * Library version, statically allocated.
 */
const char *zeta3_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void zeta3_string_free(char *s);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum Zeta3Status zeta3_legendre_new(uint64_t n, struct Zeta3Polynomial **out);

/**
 * # Safety
 * `p` must be a live handle; `out` valid for writes.
 */
enum Zeta3Status zeta3_polynomial_degree(const struct Zeta3Polynomial *p, uint64_t *out);

/**
 * Coefficient of x^k as a decimal string.
 *
 * # Safety
 * `p` must be a live handle; `out` valid for writes.
 */
enum Zeta3Status zeta3_polynomial_coefficient(const struct Zeta3Polynomial *p,
                                              uint64_t k,
                                              char **out);

/**
 * Space-separated coefficients in increasing degree.
 *
 * # Safety
 * `p` must be a live handle; `out` valid for writes.
 */
enum Zeta3Status zeta3_polynomial_to_string(const struct Zeta3Polynomial *p, char **out);

/**
 * # Safety
 * `p` must be null or a handle from [`zeta3_legendre_new`], not yet freed.
 */
void zeta3_polynomial_free(struct Zeta3Polynomial *p);

/**
 * The n-th record with ζ(3) enclosed by `precision` series terms.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum Zeta3Status zeta3_record_new(uint64_t n, uint64_t precision, struct Zeta3Record **out);

/**
 * A_n, B_n and d_n as decimal strings. Any out-pointer may be null.
 *
 * # Safety
 * `r` must be a live handle; non-null out-pointers valid for writes.
 */
enum Zeta3Status zeta3_record_integers(const struct Zeta3Record *r, char **a, char **b, char **d);

/**
 * Endpoints of the u_n enclosure as "num/den" strings.
 *
 * # Safety
 * `r` must be a live handle; `lo` and `hi` valid for writes.
 */
enum Zeta3Status zeta3_record_u_enclosure(const struct Zeta3Record *r, char **lo, char **hi);

/**
 * # Safety
 * `r` must be null or a handle from [`zeta3_record_new`], not yet freed.
 */
void zeta3_record_free(struct Zeta3Record *r);

/**
 * Searches for a certificate excluding denominators up to `q_max`, a
 * decimal string.
 *
 * # Safety
 * `q_max` must be a NUL-terminated string; `out` valid for writes.
 */
enum Zeta3Status zeta3_certificate_new(const char *q_max,
                                       uint64_t precision,
                                       struct Zeta3Certificate **out);

/**
 * # Safety
 * `json` must be a NUL-terminated string; `out` valid for writes.
 */
enum Zeta3Status zeta3_certificate_from_json(const char *json, struct Zeta3Certificate **out);

/**
 * # Safety
 * `c` must be a live handle; `out` valid for writes.
 */
enum Zeta3Status zeta3_certificate_to_json(const struct Zeta3Certificate *c, char **out);

/**
 * # Safety
 * `c` must be a live handle; `out` valid for writes.
 */
enum Zeta3Status zeta3_certificate_n(const struct Zeta3Certificate *c, uint64_t *out);

/**
 * Recomputes the certificate. Returns `Ok` when it holds and
 * `VerificationFailed` otherwise.
 *
 * # Safety
 * `c` must be a live handle.
 */
enum Zeta3Status zeta3_certificate_verify(const struct Zeta3Certificate *c);

/**
 * # Safety
 * `c` must be null or a certificate handle, not yet freed.
 */
void zeta3_certificate_free(struct Zeta3Certificate *c);

/**
 * J_rs by quadrature.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum Zeta3Status zeta3_j_quadrature(uint32_t r,
                                    uint32_t s,
                                    double tol,
                                    struct Zeta3Quadrature *out);

/**
 * 𝔍_n as a double integral.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum Zeta3Status zeta3_jj_quadrature(uint64_t n, double tol, struct Zeta3Quadrature *out);

/**
 * 𝔍_n as a triple integral.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum Zeta3Status zeta3_jj_triple_quadrature(uint64_t n, double tol, struct Zeta3Quadrature *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ZETA3_H */
