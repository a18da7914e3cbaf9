/* C interface for the qubit quantum-information-geometry toolkit.
 *
 * Conventions:
 *   - constructors write an opaque handle through an out-parameter and
 *     return QIG_OK on success;
 *   - every char* produced by the library is owned by the caller and must
 *     be released with qig_string_free;
 *   - on any nonzero return, qig_last_error copies a thread-local message.
 *
 * Maintained by hand alongside crates/qig-ffi/src/lib.rs; the crate's test
 * suite checks that every exported symbol appears here.
 */

#ifndef QIG_H
#define QIG_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* error codes */
#define QIG_OK 0
#define QIG_ERR_NULL 1
#define QIG_ERR_UTF8 2
#define QIG_ERR_PARSE 3
#define QIG_ERR_DOMAIN 4
#define QIG_ERR_SINGULAR 5
#define QIG_ERR_NUMERIC 6

/* opaque handles */
typedef struct QigPetz QigPetz;
typedef struct QigMap QigMap;
typedef struct QigMetric QigMetric;

/* diagnostics */
size_t qig_last_error(char *buf, size_t cap);
void qig_string_free(char *s);

/* Petz functions: specs are vn | tsallis:q | power:a | exp-scheme:beta |
 * exp-scheme-raw:beta | square-control */
int qig_petz_new(const char *spec, QigPetz **out);
void qig_petz_free(QigPetz *f);
int qig_petz_eval(const QigPetz *f, double t, double *out);
int qig_petz_eval_complex(const QigPetz *f, double re, double im,
                          double *out_re, double *out_im);
int qig_petz_symmetry_residual(const QigPetz *f, double t, double *out);

/* scheme maps: identity | neg | exp:beta */
int qig_map_new(const char *spec, QigMap **out);
void qig_map_free(QigMap *m);
int qig_map_value(const QigMap *m, double w, double *out);
int qig_map_derivative(const QigMap *m, double w, double *out);
int qig_conformal_factor(const QigMap *m, double w, double *out);

/* metrics in canonical polar form: vn | tsallis:q | petz-tsallis:q | any
 * Petz function spec */
int qig_metric_new(const char *spec, QigMetric **out);
void qig_metric_free(QigMetric *g);
int qig_metric_coeffs(const QigMetric *g, double w, double *g_w,
                      double *g_perp);

/* monotonicity tests; reports are JSON strings. clean_is_pass selects the
 * verdict a clean search earns (nonzero: pass, zero: inconclusive). */
int qig_loewner_scan_json(const QigPetz *f, double re_min, double re_max,
                          double im_min, double im_max, uint32_t nr,
                          uint32_t ni, double tol, char **out_json);
int qig_matrix_test_json(const QigPetz *f, uint32_t dim, uint64_t samples,
                         uint64_t seed, double tol, int clean_is_pass,
                         char **out_json);
int qig_cptp_test_json(const QigPetz *f, uint64_t samples, uint64_t seed,
                       double tol, int clean_is_pass, char **out_json);

/* scheme equation: grid returned as CSV (w,wt,dwt_dw,residual) */
int qig_solve_ode_csv(const char *f_spec, const char *h_spec, double w0,
                      double wt0, int branch, double lo, double hi,
                      char **out_csv);

#ifdef __cplusplus
}
#endif

#endif /* QIG_H */
