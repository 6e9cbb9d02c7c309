#ifndef FORMRED_H
#define FORMRED_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(FORMRED_BUILDING)
#    define FR_API __declspec(dllexport)
#  else
#    define FR_API __declspec(dllimport)
#  endif
#else
#  define FR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fr_status {
    FR_OK = 0,
    FR_ERR_INPUT = 1,       /* malformed input or failed validation */
    FR_ERR_CONVERGENCE = 2, /* root finder, covariant solver or reducer did not finish */
    FR_ERR_VIOLATION = 3,   /* a bound or growth assertion failed */
    FR_ERR_INTERNAL = 4
} fr_status;

typedef struct fr_form fr_form;
typedef struct fr_reduction fr_reduction;
typedef struct fr_classification fr_classification;

typedef struct fr_options {
    double eps;    /* <= 0 picks the smallest threshold for the degree */
    double tol;    /* covariant solver tolerance */
    int max_iter;  /* root finder and Newton iterations */
    int max_steps; /* reduction steps */
    int classic;   /* nonzero forces the classic translate/invert loop */
} fr_options;

typedef struct fr_selftest_options {
    size_t count;
    uint64_t seed;
    double eps;       /* <= 0 picks the per-degree default */
    unsigned threads; /* 0 for hardware concurrency */
    double tol;
    int max_iter;
} fr_selftest_options;

FR_API void fr_options_init(fr_options* opts);
FR_API void fr_selftest_options_init(fr_selftest_options* opts);

FR_API const char* fr_version(void);

/* message of the last failure on this thread, "" if none */
FR_API const char* fr_last_error(void);
/* name of the library error code of the last failure, "" if none */
FR_API const char* fr_last_error_code(void);

/* strings returned through char** are owned by the caller */
FR_API void fr_string_free(char* s);

FR_API fr_status fr_form_from_json(const char* text, const fr_options* opts, fr_form** out);
FR_API fr_status fr_form_from_coeffs(const double* coeffs, size_t count, const fr_options* opts, fr_form** out);
FR_API fr_status fr_form_from_roots(const double* re, const double* im, size_t count, double leading, fr_form** out);
FR_API void fr_form_free(fr_form* form);
FR_API int fr_form_degree(const fr_form* form);
/* number of roots at infinity; fr_form_roots lists the finite ones */
FR_API int fr_form_infinite_roots(const fr_form* form);
FR_API fr_status fr_form_roots(const fr_form* form, double* re, double* im, size_t capacity);
FR_API fr_status fr_form_to_json(const fr_form* form, char** out);

FR_API fr_status fr_covariant(const fr_form* form, const fr_options* opts, double* t, double* u);
FR_API fr_status fr_covariant_json(const fr_form* form, const fr_options* opts, char** out);

FR_API fr_status fr_reduce(const fr_form* form, const fr_options* opts, fr_reduction** out);
FR_API void fr_reduction_free(fr_reduction* red);
/* new handle owned by the caller */
FR_API fr_status fr_reduction_form(const fr_reduction* red, fr_form** out);
/* a, b, c, d of the accumulated matrix */
FR_API void fr_reduction_matrix(const fr_reduction* red, int64_t out[4]);
FR_API void fr_reduction_final_z(const fr_reduction* red, double* t, double* u);
FR_API size_t fr_reduction_step_count(const fr_reduction* red);
FR_API fr_status fr_reduction_to_json(const fr_reduction* red, char** out);

FR_API fr_status fr_classify(const fr_form* form, double eps, fr_classification** out);
FR_API void fr_classification_free(fr_classification* c);
FR_API const char* fr_classification_tag(const fr_classification* c);
FR_API const char* fr_classification_label(const fr_classification* c);
FR_API fr_status fr_classification_to_json(const fr_classification* c, char** out);

/* every applicable bound at the form's covariant point */
FR_API fr_status fr_bounds_json(const fr_form* form, const fr_options* opts, char** out, size_t* violations);

FR_API fr_status fr_selftest_json(const fr_selftest_options* opts, char** out, size_t* violations,
                                  size_t* solver_failures);

#ifdef __cplusplus
}
#endif

#endif
