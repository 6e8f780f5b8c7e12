#ifndef SUPERWEIL_H
#define SUPERWEIL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum SwStatus {
  SW_STATUS_OK = 0,
  SW_STATUS_NULL_POINTER = 1,
  SW_STATUS_INVALID_UTF8 = 2,
  SW_STATUS_SYNTAX = 3,
  SW_STATUS_MALFORMED = 4,
  SW_STATUS_DIMENSION = 5,
  SW_STATUS_PARITY = 6,
  SW_STATUS_OUTSIDE_REGION = 7,
  SW_STATUS_FUNCTION_DOMAIN = 8,
  SW_STATUS_NEEDS_FLOAT = 9,
  SW_STATUS_ALGEBRA_MISMATCH = 10,
  SW_STATUS_BUFFER_TOO_SMALL = 11,
  SW_STATUS_OTHER = 12,
  SW_STATUS_PANIC = 13,
} SwStatus;

// An algebra presentation.
typedef struct SwAlgebra SwAlgebra;

// Coordinate assignments of an A-point, evaluated exactly or in doubles
// on demand.
typedef struct SwPoint SwPoint;

// A section on a full superdomain `K^{p|q}`.
typedef struct SwSection SwSection;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread (empty if none). Valid
// until the next failing call on the same thread.
const char *sw_last_error(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must come from this library and not be freed twice.
void sw_string_free(char *s);

// Parses an algebra in the algebra notation (`"grassmann:2"`,
// `"quot:trunc:1,1,3;t1^2"`, `"tensor:dual,dual"`, ...).
//
// # Safety
// `spec` is a NUL-terminated string; `out_alg` is writable.
enum SwStatus sw_algebra_parse(const char *spec, struct SwAlgebra **out_alg);

// # Safety
// `a` comes from `sw_algebra_parse` and is not used afterwards.
void sw_algebra_free(struct SwAlgebra *a);

// Dimension of the algebra (0 for a null handle).
//
// # Safety
// `a` is null or a live handle.
uintptr_t sw_algebra_dim(const struct SwAlgebra *a);

// Height of the algebra (0 for a null handle).
//
// # Safety
// `a` is null or a live handle.
uintptr_t sw_algebra_height(const struct SwAlgebra *a);

// The algebra as JSON (presentation and basis names).
//
// # Safety
// `a` is a live handle; `json` is writable.
enum SwStatus sw_algebra_to_json(const struct SwAlgebra *a, char **json);

// Parses a section on the full domain `K^{p|q}`.
//
// # Safety
// `expr` is a NUL-terminated string; `out_sec` is writable.
enum SwStatus sw_section_parse(const char *expr,
                               uintptr_t p,
                               uintptr_t q,
                               struct SwSection **out_sec);

// # Safety
// `s` comes from `sw_section_parse` and is not used afterwards.
void sw_section_free(struct SwSection *s);

// An A-point of `K^{p|q}` over `alg` from assignments such as
// `"x1=2, th1=z1, th2=z2"`. The algebra handle may be freed afterwards.
//
// # Safety
// Pointers are live / NUL-terminated / writable as appropriate.
enum SwStatus sw_point_parse(const struct SwAlgebra *alg,
                             const char *assignment,
                             uintptr_t p,
                             uintptr_t q,
                             struct SwPoint **out_pt);

// # Safety
// `x` comes from `sw_point_parse` and is not used afterwards.
void sw_point_free(struct SwPoint *x);

// Evaluates `s` at `x` in doubles, writing the coefficients in basis
// order into `coeffs[0..len]`; `len` must be at least the algebra
// dimension.
//
// # Safety
// Handles are live; `coeffs` has room for `len` doubles.
enum SwStatus sw_eval_f64(const struct SwPoint *x,
                          const struct SwSection *s,
                          double *coeffs,
                          uintptr_t len);

// Evaluates `s` at `x` and returns the element as JSON: exact rationals
// when `exact` is nonzero (fails with `NeedsFloat` on transcendental
// sections), doubles otherwise.
//
// # Safety
// Handles are live; `json` is writable.
enum SwStatus sw_eval_json(const struct SwPoint *x,
                           const struct SwSection *s,
                           int32_t exact,
                           char **json);

// Value and directional derivatives of a section at `base` along
// `(v_even, v_odd)`: `out3 = {s(base), Σ a_i ∂s/∂x_i, Σ b_j ∂s/∂θ_j}`.
// Array lengths are the section's `p` and `q`.
//
// # Safety
// `s` is live; arrays hold `p`, `p`, `q` and 3 doubles.
enum SwStatus sw_tangent(const struct SwSection *s,
                         const double *base,
                         const double *v_even,
                         const double *v_odd,
                         double *out3);

// Exact coefficient `index` of `s` at `x` as `"n"` or `"n/d"`.
//
// # Safety
// Handles are live; `value` is writable.
enum SwStatus sw_eval_coefficient(const struct SwPoint *x,
                                  const struct SwSection *s,
                                  uintptr_t index,
                                  char **value);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUPERWEIL_H */
