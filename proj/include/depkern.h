/* C interface to the depkern library.
 *
 * Every function returns DEPKERN_OK or an error code; depkern_last_error()
 * gives a thread-local message for the most recent failing call on the
 * calling thread. Strings returned through char** are heap-allocated and
 * released with depkern_string_free(). Handles are released with their
 * matching *_free(); passing NULL to a *_free() is a no-op.
 */
#ifndef DEPKERN_H
#define DEPKERN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(DEPKERN_BUILD_SHARED)
#define DEPKERN_API __declspec(dllexport)
#else
#define DEPKERN_API __declspec(dllimport)
#endif
#else
#define DEPKERN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define DEPKERN_OK 0
#define DEPKERN_E_INVALID_ARGUMENT 1
#define DEPKERN_E_UNKNOWN_KERNEL 2
#define DEPKERN_E_IO 3
#define DEPKERN_E_PARSE 4
#define DEPKERN_E_FORMAT 5
#define DEPKERN_E_TIES 6
#define DEPKERN_E_SAMPLE_TOO_SMALL 7
#define DEPKERN_E_TOO_LARGE 8
#define DEPKERN_E_QUADRATURE 9
#define DEPKERN_E_CONFIG 10
#define DEPKERN_E_INTERNAL 11

#define DEPKERN_TIES_ERROR 0
#define DEPKERN_TIES_JITTER 1

DEPKERN_API const char* depkern_version(void);
DEPKERN_API const char* depkern_last_error(void);
DEPKERN_API void depkern_string_free(char* s);

/* ------------------------------------------------------------------ */
/* data handles                                                        */

typedef struct depkern_sample depkern_sample;
typedef struct depkern_tables depkern_tables;

DEPKERN_API int depkern_sample_create(const double* x, const double* y, size_t n,
                                      depkern_sample** out);
DEPKERN_API int depkern_sample_from_csv(const char* path, int has_header, depkern_sample** out);
DEPKERN_API void depkern_sample_free(depkern_sample* s);
DEPKERN_API int depkern_sample_size(const depkern_sample* s, size_t* out);

/* Pair-integral tables for sample size n. Pass h1 <= 0 or h2 <= 0 to use the
 * defaults n^-0.3 and n^-0.8. kernel is "epanechnikov" or "triangular". */
DEPKERN_API int depkern_tables_build(size_t n, const char* kernel, double h1, double h2,
                                     depkern_tables** out);
DEPKERN_API void depkern_tables_free(depkern_tables* t);
DEPKERN_API int depkern_tables_info(const depkern_tables* t, size_t* n, double* h1, double* h2);

/* ------------------------------------------------------------------ */
/* scalar operations                                                   */

/* Smoothed squared conditional-cdf integral of the sample's ranks. */
DEPKERN_API int depkern_tau2(const depkern_sample* s, const depkern_tables* t, int ties_policy,
                             uint64_t seed, double* out);
/* Rank autocorrelation coefficient of the sample. */
DEPKERN_API int depkern_xi(const depkern_sample* s, int ties_policy, uint64_t seed, double* out);
/* Limit variance constant of the studentized statistic. */
DEPKERN_API int depkern_sigma0_sq(const char* kernel, double* out);
/* Exact null mean of tau2, its affine transform, and the cheap surrogate. */
DEPKERN_API int depkern_centering_bhat(const depkern_tables* t, double* out);
DEPKERN_API int depkern_centering_bn(const depkern_tables* t, double* out);
DEPKERN_API int depkern_centering_surrogate(size_t n, const char* kernel, double h1, double* out);
/* Overlap integral psi(t) of kernel density and shifted cdf, t in [0, 1]. */
DEPKERN_API int depkern_psi(const char* kernel, double t, double* out);

/* ------------------------------------------------------------------ */
/* JSON-configured runners                                             */
/*
 * Each takes a JSON configuration string and produces a JSON document.
 * Malformed or unknown configuration keys give DEPKERN_E_CONFIG.
 *
 * estimate: {"csv": path, "has_header": bool, "kernel": str, "h1": num,
 *            "h2": num, "ties": "error"|"jitter", "seed": uint}
 *           (csv/has_header required, the rest optional)
 * test:     estimate keys plus {"alpha": num, "method": "kernel"|"chatterjee"}
 * sigma0:   {"kernel": str, "tol": num}
 * centering:{"n": uint, "kernel": str, "h1": num, "h2": num,
 *            "surrogate": bool}
 *           surrogate=true computes only the cheap surrogate (n >= 3);
 *           otherwise the full document needs n >= 4.
 * sigma2:   {"model": "independence"|"gaussian", "rho": num, "nodes": uint}
 * oracle:   {"n": uint, "kernel": str, "h1": num, "h2": num,
 *            "num_perms": uint, "seed": uint}
 *           4 <= n <= 8 enumerates all permutations and checks the
 *           closed-form variance; larger n needs num_perms > 0 and reports
 *           the sampled bridge only.
 */
DEPKERN_API int depkern_estimate_run(const char* config_json, char** out_json);
DEPKERN_API int depkern_test_run(const char* config_json, char** out_json);
DEPKERN_API int depkern_sigma0_run(const char* config_json, char** out_json);
DEPKERN_API int depkern_centering_run(const char* config_json, char** out_json);
DEPKERN_API int depkern_sigma2_run(const char* config_json, char** out_json);
DEPKERN_API int depkern_oracle_run(const char* config_json, char** out_json);

/* Monte Carlo runners; one simulation pass fills both documents. Either
 * output pointer may be NULL if that rendering is not wanted.
 *
 * power:    {"ns": [uint...], "rho_rule": str | "rho_rules": [str...],
 *            "methods": [str...], "h1": num, "h2": num, "alpha": num,
 *            "reps": uint, "seed": uint, "threads": uint}
 *           rho rules: "zero" | "fixed=V" (|V| <= 1) | "n^E" | "nh1^E"
 *           (E < 0; nh1^E means (n/h1)^E); methods: "chatterjee" |
 *           "kernel-epanechnikov" | "kernel-triangular".
 * nulldist: {"n": uint, "kernel": str, "h1": num, "h2": num, "reps": uint,
 *            "seed": uint, "bins": uint, "threads": uint}
 */
DEPKERN_API int depkern_power_study_run(const char* config_json, char** out_json, char** out_csv);
DEPKERN_API int depkern_nulldist_run(const char* config_json, char** out_json, char** out_csv);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DEPKERN_H */
