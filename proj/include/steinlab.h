#ifndef STEINLAB_H
#define STEINLAB_H

/* C interface to the steinlab shared library.
 *
 * All functions return a status code (STEINLAB_OK on success). Fallible
 * calls take a caller-provided error buffer that receives a human-readable
 * message on failure. Objects are opaque handles released with the
 * matching *_free call.
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define STEINLAB_OK 0
#define STEINLAB_ERR_INVALID 1
#define STEINLAB_ERR_NOT_HERMITIAN 2
#define STEINLAB_ERR_NOT_PSD 3
#define STEINLAB_ERR_SUPPORT 4
#define STEINLAB_ERR_CAP 5
#define STEINLAB_ERR_PARSE 6
#define STEINLAB_ERR_IO 7
#define STEINLAB_ERR_INFEASIBLE 8
#define STEINLAB_ERR_INTERNAL 99

typedef struct steinlab_op steinlab_op;
typedef struct steinlab_instance steinlab_instance;

const char* steinlab_version(void);

/* Formats with 12 significant digits, scientific below 1e-4, INF for the
 * infinite branch. Returns STEINLAB_OK unless the buffer is too small. */
int steinlab_format_value(double x, char* buf, int buflen);

/* ---- operators ---- */

int steinlab_op_load(const char* path, steinlab_op** out, char* err, int errlen);
int steinlab_op_save(const steinlab_op* op, const char* path, char* err, int errlen);
int steinlab_op_random_state(int dim, unsigned long long seed, steinlab_op** out, char* err,
                             int errlen);
int steinlab_op_dim(const steinlab_op* op, int* out_dim);
int steinlab_op_entry(const steinlab_op* op, int i, int j, double* re, double* im);
void steinlab_op_free(steinlab_op* op);

/* ---- divergences ---- */

/* family: "old", "new" or "umegaki" (alpha ignored for umegaki; alpha = 1
 * with old/new evaluates the umegaki limit). is_inf is set to 1 when the
 * divergence takes its +infinity branch, with value set to HUGE_VAL. */
int steinlab_divergence(const steinlab_op* rho, const steinlab_op* sigma, const char* family,
                        double alpha, double* value, int* is_inf, char* err, int errlen);

/* ---- hypothesis instances ---- */

int steinlab_instance_create(const steinlab_op* const* pool, int pool_len, const steinlab_op* sigma,
                             double epsilon, int is_finite_family, steinlab_instance** out, char* err,
                             int errlen);
void steinlab_instance_free(steinlab_instance* inst);

/* Bound sweep over n = n_min..n_max. delta_override < 0 uses the default
 * schedule (0 for finite families, eps/(2 n^2) otherwise). The CSV is
 * heap-allocated; release it with steinlab_free_string. */
int steinlab_sweep_csv(const steinlab_instance* inst, int n_min, int n_max, int with_exact,
                       unsigned long long seed, unsigned long long dim_cap, double delta_override,
                       char** out_csv, char* err, int errlen);

/* Exact optimal type-II error of the n-copy problem over the instance pool.
 * certified is 1 when the duality gap is below 1e-7. */
int steinlab_oracle_run(const steinlab_instance* inst, int n, unsigned long long seed,
                        unsigned long long dim_cap, double* beta, double* dual, double* gap,
                        int* certified, double* alpha_worst, char* err, int errlen);

/* ---- covering nets ---- */

/* out_indices must hold pool_len ints; out_size receives the net size.
 * out_card_bound_log receives log of min(pool_len, (1+2/delta)^D). */
int steinlab_net(const steinlab_op* const* pool, int pool_len, double delta, int* out_indices,
                 int* out_size, double* out_radius, double* out_card_bound_log, char* err, int errlen);

/* ---- property verification ---- */

/* Runs the full property suite; the report text is heap-allocated. */
int steinlab_verify(unsigned long long seed, int trials, char** out_report, long* out_failures,
                    char* err, int errlen);

void steinlab_free_string(char* s);

#ifdef __cplusplus
}
#endif

#endif /* STEINLAB_H */
