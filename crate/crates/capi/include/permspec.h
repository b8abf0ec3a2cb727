/* C ABI for the permspec toolkit.
 *
 * Conventions:
 *   - Every fallible call returns a PsStatus; 0 is success. On failure a
 *     thread-local message is available through ps_last_error().
 *   - Strings written through out-parameters are allocated by the library
 *     and must be released with ps_string_free().
 *   - PsEngine and PsPolynomial are opaque; release them with the matching
 *     *_free function. Handles are not thread-safe; use one per thread.
 */

#ifndef PERMSPEC_H
#define PERMSPEC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum PsStatus {
  PS_OK = 0,
  PS_ERR_PRECONDITION = 2,
  PS_ERR_BUDGET = 3,
  PS_ERR_NONCONVERGENCE = 4,
  PS_ERR_INTERNAL = 5,
  PS_ERR_NULL_ARGUMENT = 7,
  PS_ERR_PANIC = 9,
} PsStatus;

/* Opaque expectation engine; caches canonical word classes across calls. */
typedef struct PsEngine PsEngine;

/* Opaque noncommutative polynomial with exact coefficients. */
typedef struct PsPolynomial PsPolynomial;

/* Message of the most recent error on this thread, or NULL. Owned by the
 * library; valid until the next failing call on the same thread. */
const char *ps_last_error(void);

/* Free a string returned through an out-parameter. */
void ps_string_free(char *s);

/* Create an engine. word_cap bounds the quotient-enumeration word length;
 * pass 0 for the default (12). */
PsEngine *ps_engine_new(size_t word_cap);
void ps_engine_free(PsEngine *engine);

/* Parse a polynomial from text, e.g. "a + A", "2*ab - (1/2+1i)*aB",
 * "[0,1;1,0]*a", or "adjacency" (then d is required). d = 0 infers the rank
 * from the generators used. */
PsStatus ps_polynomial_parse(const char *text, uint32_t d, PsPolynomial **out);

/* The adjacency polynomial of the 2d-regular permutation model. */
PsStatus ps_polynomial_adjacency(uint32_t d, PsPolynomial **out);

void ps_polynomial_free(PsPolynomial *poly);

/* Symbolic expected trace E[tr_N w(S^N)] as JSON with exact numerator and
 * denominator coefficients in x = 1/N and the denominator's (1-jx) factors.
 * The symbolic form is exact for N >= q (the word length). d = 0 infers. */
PsStatus ps_word_expectation_json(PsEngine *engine, const char *word,
                                  uint32_t d, char **out_json);

/* Exact E[tr_N w(S^N)] at a concrete N >= 1, as a "p/q" string. */
PsStatus ps_word_expectation_at(PsEngine *engine, const char *word, uint32_t d,
                                uint64_t n, char **out_rational);

/* Taylor functionals nu_0..nu_order of the expected trace of h(P) with
 * h = x^power, as a JSON array of "p/q" strings. P must be self-adjoint. */
PsStatus ps_nu_values_json(PsEngine *engine, const PsPolynomial *poly,
                           uint32_t power, uint32_t order, char **out_json);

/* The Kesten norm 2*sqrt(2d-1) of the 2d-regular tree; NaN for d = 0. */
double ps_kesten_norm(uint32_t d);

/* Staircase outlier location rho_m = (2m-1) + (2d-1)/(2m-1) in the outlier
 * regime 2m-1 > sqrt(2d-1), else the bulk edge 2*sqrt(2d-1). */
double ps_rho_m(uint32_t d, uint32_t m);

/* Friedman-shaped tail certificate at (d, eps, N) as JSON. Requires
 * 0 < eps < 2d - 2*sqrt(2d-1); the bound is exact in its N- and eps-scaling
 * and carries an explicit up-to-universal-constant flag. */
PsStatus ps_friedman_certificate_json(uint32_t d, double eps, uint64_t n,
                                      double universal_constant,
                                      char **out_json);

/* Sample `trials` random 2d-regular graphs on n vertices (seeded,
 * reproducible) and return lambda_2 tail statistics as JSON. */
PsStatus ps_tail_experiment_json(uint32_t d, size_t n, double eps,
                                 uint64_t trials, uint64_t seed,
                                 char **out_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PERMSPEC_H */
