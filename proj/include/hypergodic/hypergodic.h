#ifndef HYPERGODIC_H
#define HYPERGODIC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define HYG_API __declspec(dllexport)
#elif defined(__GNUC__)
#define HYG_API __attribute__((visibility("default")))
#else
#define HYG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hyg_status {
  HYG_OK = 0,
  HYG_ERR_MALFORMED_INPUT = 1,
  HYG_ERR_CAPABILITY = 2,
  HYG_ERR_HORIZON = 3,
  HYG_ERR_DIVERGENCE = 4,
  HYG_ERR_NUMERICAL = 5,
  HYG_ERR_EMPTY_SUPPORT = 6,
  HYG_ERR_CONFIG = 7,
  HYG_ERR_INSUFFICIENT_DEPTH = 8,
  HYG_ERR_PRECONDITION = 9,
  HYG_ERR_UNDER_SAMPLED = 10,
  HYG_ERR_NULL_ARGUMENT = 20,
  HYG_ERR_BUFFER_TOO_SMALL = 21,
  HYG_ERR_INTERNAL = 99
} hyg_status;

typedef enum hyg_verdict { HYG_PASS = 0, HYG_FAIL = 1, HYG_SKIPPED = 2 } hyg_verdict;

typedef struct hyg_group hyg_group;
typedef struct hyg_measure hyg_measure;
typedef struct hyg_action hyg_action;
typedef struct hyg_config hyg_config;
typedef struct hyg_report hyg_report;

HYG_API const char* hyg_version(void);
HYG_API const char* hyg_status_name(hyg_status status);
/* Message of the last failed call on this thread; "" if none. */
HYG_API const char* hyg_last_error(void);

/* String outputs: the call writes at most `len` bytes including the NUL.
 * `needed` (optional) receives the full length including the NUL. A short
 * buffer yields HYG_ERR_BUFFER_TOO_SMALL. */

/* Groups: "F_2", "Z_2*Z_3", "F_2xZ_3" (underscores optional). */
HYG_API hyg_status hyg_group_new(const char* description, hyg_group** out);
HYG_API void hyg_group_free(hyg_group* group);
HYG_API hyg_status hyg_group_describe(const hyg_group* group, char* buf, size_t len, size_t* needed);
HYG_API hyg_status hyg_word_multiply(const hyg_group* group, const char* x, const char* y, char* buf, size_t len,
                                     size_t* needed);
HYG_API hyg_status hyg_word_inverse(const hyg_group* group, const char* x, char* buf, size_t len, size_t* needed);
HYG_API hyg_status hyg_word_length(const hyg_group* group, const char* x, int* out);
/* Decimal sphere size |S_n|. */
HYG_API hyg_status hyg_sphere_size(const hyg_group* group, int n, char* buf, size_t len, size_t* needed);
HYG_API hyg_status hyg_growth_exponent(const hyg_group* group, double* out);
HYG_API hyg_status hyg_delta_estimate(const hyg_group* group, int radius, uint64_t budget, uint64_t seed,
                                      int workers, double* delta, int* exhaustive);
/* Rays such as "a^inf" or "A(ab)^inf". */
HYG_API hyg_status hyg_horofunction(const hyg_group* group, const char* ray, const char* word, int* out);
HYG_API hyg_status hyg_r_lambda(const hyg_group* group, const char* word, const char* ray, int* out);
HYG_API hyg_status hyg_cylinder_measure(const hyg_group* group, const char* word, double* out);

/* Measures: family is "sigma", "sigma_prime", "mu" or "beta". */
HYG_API hyg_status hyg_measure_new(const hyg_group* group, const char* family, int n, hyg_measure** out);
HYG_API hyg_status hyg_kappa_new(const hyg_group* group, int r, int a, int T, long samples, uint64_t seed,
                                 int workers, hyg_measure** out);
HYG_API void hyg_measure_free(hyg_measure* measure);
HYG_API hyg_status hyg_measure_weight(const hyg_measure* measure, const char* word, double* out);
HYG_API hyg_status hyg_measure_length_range(const hyg_measure* measure, int* min_length, int* max_length);

/* Finite actions. */
HYG_API hyg_status hyg_action_parity_new(const hyg_group* group, hyg_action** out);
/* Generator letters act on Z/n by adding images[i] (one per cyclic factor). */
HYG_API hyg_status hyg_action_cyclic_new(const hyg_group* group, int n, const int* images, size_t count,
                                         hyg_action** out);
HYG_API void hyg_action_free(hyg_action* action);
HYG_API size_t hyg_action_size(const hyg_action* action);
/* out[x] = sum_g zeta(g) f(g^-1 x); f and out have hyg_action_size entries. */
HYG_API hyg_status hyg_apply(const hyg_measure* measure, const hyg_action* action, const double* f, size_t n,
                             double* out);

/* Horoshells on tree-like groups. Count written in decimal. */
HYG_API hyg_status hyg_gamma_count(const hyg_group* group, const char* ray, int t, int T, int r, char* buf, size_t len,
                                   size_t* needed);

/* Experiments. */
HYG_API hyg_status hyg_config_parse(const char* text, hyg_config** out);
HYG_API hyg_status hyg_config_load(const char* path, hyg_config** out);
HYG_API void hyg_config_free(hyg_config* config);
HYG_API hyg_status hyg_config_serialize(const hyg_config* config, char* buf, size_t len, size_t* needed);
/* Flag overrides; negative workers/cap and a NULL out_dir leave values unchanged. */
HYG_API hyg_status hyg_config_override(hyg_config* config, const uint64_t* seed, int workers, const char* out_dir,
                                       int cap);
/* Keeps only experiments of the given kind; NULL keeps all. */
HYG_API hyg_status hyg_config_filter_kind(hyg_config* config, const char* kind);
HYG_API size_t hyg_config_experiment_count(const hyg_config* config);
HYG_API hyg_status hyg_config_out_dir(const hyg_config* config, char* buf, size_t len, size_t* needed);

HYG_API hyg_status hyg_run(const hyg_config* config, hyg_report** out);
/* only: comma-separated criterion ids or NULL for all. */
HYG_API hyg_status hyg_verify(int cap, uint64_t seed, int workers, const char* only, hyg_report** out);
HYG_API void hyg_report_free(hyg_report* report);
/* 0 success, 1 verdict failure or experiment error. */
HYG_API int hyg_report_exit_code(const hyg_report* report);
HYG_API hyg_status hyg_report_json(const hyg_report* report, char* buf, size_t len, size_t* needed);
HYG_API hyg_status hyg_report_write(const hyg_report* report, const char* dir);
HYG_API size_t hyg_report_verdict_count(const hyg_report* report);
/* Pointers stay valid until the report is freed. */
HYG_API hyg_status hyg_report_verdict(const hyg_report* report, size_t i, const char** id, hyg_verdict* verdict,
                                      const char** detail, double* seconds);
HYG_API size_t hyg_report_experiment_count(const hyg_report* report);
/* error is NULL when the experiment succeeded. */
HYG_API hyg_status hyg_report_experiment(const hyg_report* report, size_t i, const char** name, const char** kind,
                                         const char** error);
HYG_API size_t hyg_report_table_count(const hyg_report* report, size_t experiment);
HYG_API hyg_status hyg_report_table(const hyg_report* report, size_t experiment, size_t table, const char** name,
                                    const char** csv);

#ifdef __cplusplus
}
#endif

#endif
