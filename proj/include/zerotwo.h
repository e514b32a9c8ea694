/*
 * C interface to the zerotwo shared library: finite-dimensional
 * non-commutative L1 calculus, channel norms and the zero-two law
 * experiment runner behind opaque handles and status codes.
 *
 * All functions are thread-safe; failure details are retrievable per
 * thread through zt_last_error(). Functions returning pointers yield NULL
 * on failure.
 */
#ifndef ZEROTWO_H
#define ZEROTWO_H

#include <stddef.h>
#include <stdint.h>

#if defined(__cplusplus)
extern "C" {
#endif

typedef enum zt_status {
  ZT_OK = 0,
  ZT_ERROR = 1,
  ZT_INVALID_INPUT = 2,
  ZT_NUMERICAL_FAILURE = 3,
  ZT_COMMUTATION_VIOLATED = 4,
  ZT_RESIDUAL_EXCEEDED = 5,
  ZT_PREMISE_VIOLATED = 6,
  ZT_SEARCH_EXHAUSTED = 7,
  ZT_TRACE_PRESERVATION_VIOLATED = 8,
  ZT_CENTER_COMMUTATION_VIOLATED = 9,
  ZT_INVALID_TRACE = 10,
  ZT_SCHEMA_VIOLATION = 11,
  ZT_IO_ERROR = 12
} zt_status;

typedef struct zt_algebra zt_algebra;
typedef struct zt_element zt_element;
typedef struct zt_superop zt_superop;

/* Build identifier, also embedded in every result file. */
const char* zt_version(void);
/* Message of the most recent failure on this thread. */
const char* zt_last_error(void);

/* --- algebra shapes ---------------------------------------------------- */

/* A direct sum of matrix blocks with strictly positive trace weights. */
zt_algebra* zt_algebra_create(const int32_t* dims, const double* weights,
                              int32_t blocks);
void zt_algebra_destroy(zt_algebra* a);
int32_t zt_algebra_herm_dim(const zt_algebra* a);

/* --- Hermitian elements ------------------------------------------------ */

/*
 * Data layout: blocks concatenated in order, each row-major n_k x n_k with
 * interleaved re,im doubles (length = 2 * sum n_k^2). Inputs are
 * symmetrized to (x + x*)/2.
 */
zt_element* zt_element_create(const zt_algebra* a, const double* interleaved,
                              size_t len);
zt_element* zt_element_identity(const zt_algebra* a);
void zt_element_destroy(zt_element* x);
zt_status zt_element_trace(const zt_element* x, double* out);
zt_status zt_element_trace_norm(const zt_element* x, double* out);
zt_status zt_element_sup_norm(const zt_element* x, double* out);

/* --- superoperators ----------------------------------------------------- */

zt_superop* zt_superop_identity(const zt_algebra* a);
zt_superop* zt_superop_depolarizing(const zt_algebra* a, double p);
/* Column-stochastic matrix on a diagonal algebra, row-major. */
zt_superop* zt_superop_stochastic(const zt_algebra* a,
                                  const double* row_major);
zt_superop* zt_superop_scale(const zt_superop* t, double s);
/* x -> outer(inner(x)) */
zt_superop* zt_superop_compose(const zt_superop* outer,
                               const zt_superop* inner);
zt_superop* zt_superop_power(const zt_superop* t, uint64_t n);
zt_superop* zt_superop_adjoint(const zt_superop* t);
zt_superop* zt_superop_subtract(const zt_superop* a, const zt_superop* b);
void zt_superop_destroy(zt_superop* t);

zt_status zt_superop_apply(const zt_superop* t, const zt_element* x,
                           zt_element** out);
zt_status zt_superop_is_trace_preserving(const zt_superop* t, int32_t* out);
zt_status zt_superop_is_unital_dual(const zt_superop* t, int32_t* out);
/* Exact norm of a positive map through its dual unit. */
zt_status zt_superop_norm_positive(const zt_superop* t,
                                   int32_t assume_positive, double* out);
/* Signed 1->1 norm estimate (seeded, deterministic). */
zt_status zt_superop_norm_1to1(const zt_superop* t, uint64_t seed,
                               int32_t restarts, double* lower, double* upper,
                               int32_t* exact);
/* Verdict of the budgeted search for T <= S. */
zt_status zt_superop_dominates(const zt_superop* t, const zt_superop* s,
                               int32_t budget, uint64_t seed,
                               int32_t* dominated);
/* Representation matrix in the tau-orthonormal Hermitian basis as CSV. */
zt_status zt_superop_write_matrix_csv(const zt_superop* t, const char* path);

/* --- experiment runner --------------------------------------------------- */

/*
 * Runs a JSON experiment config and persists JSON/CSV (and SVG when plot
 * is nonzero) artifacts under out_dir. exit_code receives the CLI
 * convention: 0 verdict success, 1 error, 2 premise violated, 3 schema
 * violation. result_json (optional) receives a malloc'd copy of the result
 * document; free it with zt_string_free.
 */
zt_status zt_run_config_file(const char* config_path, const char* out_dir,
                             int64_t seed_override, int32_t plot,
                             int32_t* exit_code, char** result_json);
zt_status zt_run_config_string(const char* config_json, const char* out_dir,
                               int64_t seed_override, int32_t plot,
                               int32_t* exit_code, char** result_json);
void zt_string_free(char* s);

/* Bundled example configs (stable kebab-case names). */
int32_t zt_example_count(void);
const char* zt_example_name(int32_t index);
const char* zt_example_config(int32_t index);

#if defined(__cplusplus)
}
#endif

#endif /* ZEROTWO_H */
