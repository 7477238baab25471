#ifndef QJENSEN_H
#define QJENSEN_H

/* C interface to the quaternionic slice-function calculus library.
 *
 * Functions are declared in JSON documents (see README for the schema),
 * loaded into opaque handles and driven through commands that return JSON
 * reports. All entry points are thread safe; error messages are thread local.
 */

#include <stddef.h>

#if defined(_WIN32)
#  define QJ_API __declspec(dllexport)
#else
#  define QJ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct qj_function qj_function;

typedef enum {
    QJ_OK = 0,
    QJ_ERR_INPUT = 1,     /* malformed spec/options or violated invariant */
    QJ_ERR_TOLERANCE = 2, /* command ran; a residual breached the tolerance */
    QJ_ERR_INTERNAL = 3
} qj_status;

typedef enum {
    QJ_VALUE_FINITE = 0,
    QJ_VALUE_POLE = 1,
    QJ_VALUE_AMBIGUOUS = 2
} qj_value_kind;

/* Parses a function spec document. On success *out owns the handle; release
 * with qj_function_free. On failure returns QJ_ERR_INPUT and qj_last_error()
 * carries a line/field diagnostic. */
QJ_API qj_status qj_function_parse_json(const char* spec_json, qj_function** out);

QJ_API void qj_function_free(qj_function* f);

/* Evaluates the function at x = [x0,x1,x2,x3]. kind receives a qj_value_kind;
 * value is filled only for QJ_VALUE_FINITE. */
QJ_API qj_status qj_function_eval(const qj_function* f, const double x[4], double value[4],
                                  int* kind);

/* log|f(x)|; -inf at zeros and +inf at poles are legitimate values. */
QJ_API qj_status qj_function_log_abs(const qj_function* f, const double x[4], double* out);

/* Runs one command: eval | jensen | riesz | blaschke-verify | bounds |
 * sphere-mean. options_json may be NULL or an object with the documented
 * flags (rho, r, R, grid, fd_h, richardson, eps_list, seed, tolerance, at,
 * phi_center, phi_radius, ball_radial, ball_grid). *report_json receives a
 * heap string (release with qj_string_free) containing the full report;
 * it is written for QJ_OK and QJ_ERR_TOLERANCE. */
QJ_API qj_status qj_run(const qj_function* f, const char* command, const char* options_json,
                        char** report_json);

/* Renders a report document in the human-readable text format. */
QJ_API qj_status qj_render_text(const char* report_json, char** text_out);

QJ_API void qj_string_free(char* s);

/* Message for the last failure on this thread; empty string when none. */
QJ_API const char* qj_last_error(void);

#ifdef __cplusplus
}
#endif

#endif /* QJENSEN_H */
