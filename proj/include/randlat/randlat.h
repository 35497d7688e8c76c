/* randlat: randomized rank-1 lattice cubature over weighted periodic
 * function spaces. C API of the shared library; opaque handles and status
 * codes. Every char* output is heap-allocated by the library and must be
 * released with rlat_string_free (arrays with rlat_buffer_free).
 */
#ifndef RANDLAT_H
#define RANDLAT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rlat_status {
    RLAT_OK = 0,
    RLAT_ERR_INVALID_ARGUMENT = 1,
    RLAT_ERR_UNSUPPORTED = 2,
    RLAT_ERR_BUDGET_EXCEEDED = 3,
    RLAT_ERR_DRAW_FAILED = 4,
    RLAT_ERR_BAD_CONFIG = 5,
    RLAT_ERR_INTERNAL = 6
} rlat_status;

const char* rlat_status_name(rlat_status s);

/* Message for the last failing call on this thread; valid until the next
 * failing call. Never NULL. */
const char* rlat_last_error(void);

const char* rlat_version(void);

void rlat_string_free(char* s);
void rlat_buffer_free(void* p);

/* ---- spaces -------------------------------------------------------- */

typedef struct rlat_space rlat_space;

/* dim >= 1, alpha >= 0, gammas non-increasing in (0,1], n_gammas >= dim */
rlat_status rlat_space_create(int32_t dim, double alpha, const double* gammas,
                              int32_t n_gammas, rlat_space** out);
void rlat_space_destroy(rlat_space* s);

/* ---- lattice rules -------------------------------------------------- */

typedef struct rlat_rule rlat_rule;

/* p prime, z_j in {1,...,p-1} */
rlat_status rlat_rule_create(uint64_t p, const uint64_t* z, int32_t dim, rlat_rule** out);
void rlat_rule_destroy(rlat_rule* r);

uint64_t rlat_rule_p(const rlat_rule* r);
int32_t rlat_rule_dim(const rlat_rule* r);
rlat_status rlat_rule_z(const rlat_rule* r, uint64_t* out /* length dim */);

/* shift coordinates in [0,1); pass NULL to clear */
rlat_status rlat_rule_set_shift(rlat_rule* r, const double* u, int32_t dim);

/* node set as text: one node per line, space-separated coordinates,
 * 17 significant digits */
rlat_status rlat_rule_points_text(const rlat_rule* r, char** out_text);

/* ---- figures of merit ----------------------------------------------- */

typedef struct rlat_merit_result {
    double value;
    int32_t closed_form; /* 1 = closed form, 0 = truncated oracle */
    double tail_bound;   /* 0 for the closed form */
} rlat_merit_result;

/* P_{beta,gamma}(p,z); closed form for beta in {2,4,6}, truncated dual
 * enumeration otherwise (oracle_trunc >= p; pass 0 for the default). */
rlat_status rlat_merit_p(const rlat_rule* r, const rlat_space* s, double beta,
                         int64_t oracle_trunc, rlat_merit_result* out);

/* Same result serialized as {p, z, beta, gammas, value, method, tail_bound}. */
rlat_status rlat_merit_json(const rlat_rule* r, const rlat_space* s, double beta,
                            int64_t oracle_trunc, char** out_json);

rlat_status rlat_worst_case_error(const rlat_rule* r, const rlat_space* s, double* out);

/* weighted Zaremba index: exact min of r over the nonzero dual lattice */
rlat_status rlat_rho_index(const rlat_rule* r, const rlat_space* s, double* out);

/* ---- test integrands ------------------------------------------------- */

typedef struct rlat_testfn rlat_testfn;

/* descriptor_json kinds: {"kind":"constant","value":c},
 * {"kind":"product_kernel","kernel_alpha":a}, {"kind":"lower_bound","n":n},
 * {"kind":"worst_case","p":p,"z":[...]},
 * {"kind":"trig_poly","coeffs":[{"h":[...],"re":x,"im":y},...]}.
 * n_hint feeds the lower-bound kind when the descriptor omits n. */
rlat_status rlat_testfn_create(const char* descriptor_json, const rlat_space* s,
                               uint64_t n_hint, rlat_testfn** out);
void rlat_testfn_destroy(rlat_testfn* f);

rlat_status rlat_testfn_eval(const rlat_testfn* f, const double* x, int32_t dim,
                             double* out_re, double* out_im);
rlat_status rlat_testfn_exact_integral(const rlat_testfn* f, double* out_re, double* out_im);
rlat_status rlat_testfn_norm(const rlat_testfn* f, double* out);

/* cubature: mean of f over the rule's nodes (shifted if a shift is set) */
rlat_status rlat_apply(const rlat_rule* r, const rlat_testfn* f, double* out_re,
                       double* out_im);

/* ---- randomized algorithm -------------------------------------------- */

/* primes in [n/2 + 1, n]; array owned by the caller via rlat_buffer_free */
rlat_status rlat_sieve_primes(uint64_t n, uint64_t** out_primes, size_t* out_count);

/* single-lambda good-vector test (merit form when alpha/lambda is even) */
rlat_status rlat_acceptance_test(uint64_t p, const uint64_t* z, int32_t dim,
                                 const rlat_space* s, double lambda, int32_t* out_pass);

/* One draw of the randomized rule. relaxed = 0 draws from the full good set
 * (the bound enforced for every lambda); relaxed = 1 uses the single-lambda
 * set. The record is {n, p, z, shift, tries, seed}. out_rule may be NULL. */
rlat_status rlat_draw(uint64_t n, const rlat_space* s, double lambda, int32_t try_cap,
                      int32_t shifted, int32_t relaxed, uint64_t seed, uint64_t stream,
                      rlat_rule** out_rule, char** out_record_json);

/* One randomized estimate of the integral of f (at most n evaluations). */
rlat_status rlat_integrate_once(uint64_t n, const rlat_space* s, double lambda,
                                int32_t try_cap, int32_t shifted, int32_t relaxed,
                                uint64_t seed, uint64_t stream, const char* testfn_json,
                                double* out_re, double* out_im, char** out_record_json);

/* ---- deterministic baseline and calculators -------------------------- */

/* component-by-component construction; JSON {z, merit_per_dim} */
rlat_status rlat_cbc_construct(uint64_t p, const rlat_space* s, char** out_json);

/* smallest sufficient n for accuracy eps; c is the absolute constant used.
 * Pass lambda/delta <= 0 to take the defaults. */
rlat_status rlat_sufficient_n(double eps, const rlat_space* s, double lambda, double delta,
                              int32_t shifted, double c, uint64_t* out_n);

/* same, as a JSON report carrying the effective lambda, delta and c */
rlat_status rlat_sufficient_n_json(double eps, const rlat_space* s, double lambda,
                                   double delta, int32_t shifted, double c, char** out_json);

/* least-squares slope of log(err) vs log(n) */
rlat_status rlat_fit_rate(const double* n_values, const double* errors, int32_t count,
                          double* out_slope, double* out_intercept, double* out_stderr);

/* ---- harness ---------------------------------------------------------- */

/* Full experiment from a JSON config (see README). Returns the CSV of all
 * records and a JSON summary with per-n aggregates and rate fits. */
rlat_status rlat_experiment_run(const char* config_json, char** out_csv,
                                char** out_summary_json);

/* Lemma/property verification suite. Returns RLAT_OK with a report whether
 * checks pass or fail; *out_all_passed tells the outcome. */
rlat_status rlat_verify_run(int32_t quick, int32_t* out_all_passed, char** out_report_json);

#ifdef __cplusplus
}
#endif

#endif /* RANDLAT_H */
