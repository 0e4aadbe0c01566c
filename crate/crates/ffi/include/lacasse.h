#ifndef LACASSE_H
#define LACASSE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define LACASSE_ROUTE_CLOSED 1

#define LACASSE_ROUTE_BRUTE 2

#define LACASSE_ROUTE_SERIES 4

typedef enum LacasseStatus {
  LACASSE_STATUS_OK = 0,
  LACASSE_STATUS_NULL_POINTER = 1,
  /**
   * Argument outside the function's domain (negative count, `n = 0`
   * where undefined, `z` outside `[0, 1/e)`, ...).
   */
  LACASSE_STATUS_DOMAIN = 2,
  LACASSE_STATUS_INDEX_BEYOND_ORDER = 3,
  LACASSE_STATUS_INCONSISTENCY = 4,
  LACASSE_STATUS_ROUTE_DISAGREEMENT = 5,
  LACASSE_STATUS_IDENTITY_FAILURE = 6,
  LACASSE_STATUS_NON_CONVERGENCE = 7,
  LACASSE_STATUS_PANIC = 8,
} LacasseStatus;

typedef enum LacasseQuantity {
  LACASSE_QUANTITY_ALPHA = 0,
  LACASSE_QUANTITY_BETA = 1,
  LACASSE_QUANTITY_SD = 2,
  LACASSE_QUANTITY_Q = 3,
  LACASSE_QUANTITY_XI = 4,
  LACASSE_QUANTITY_XI2 = 5,
  LACASSE_QUANTITY_DIFF = 6,
} LacasseQuantity;

typedef enum LacasseReportField {
  LACASSE_REPORT_FIELD_ALPHA = 0,
  LACASSE_REPORT_FIELD_BETA = 1,
  LACASSE_REPORT_FIELD_DIFFERENCE = 2,
  LACASSE_REPORT_FIELD_EXPECTED = 3,
} LacasseReportField;

/**
 * Opaque verification report.
 */
typedef struct LacasseReport LacasseReport;

/**
 * Opaque truncated power series.
 */
typedef struct LacasseSeries LacasseSeries;

typedef struct LacasseTreeEval {
  double y;
  double residual;
  uint32_t iterations;
} LacasseTreeEval;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code. Never NULL; do not free.
 */
const char *lacasse_status_message(enum LacasseStatus status);

/**
 * Detail of the most recent failure on this thread, or NULL if none.
 * Valid until the next failing call on the same thread; do not free.
 */
const char *lacasse_last_error_message(void);

/**
 * Release a string returned by this library. NULL is ignored.
 */
void lacasse_string_free(char *s);

/**
 * Exact value of `quantity` at `n` as a decimal string. `d` is used only
 * for `LACASSE_QUANTITY_SD`.
 */
enum LacasseStatus lacasse_value(enum LacasseQuantity quantity, int64_t n, int64_t d, char **out);

/**
 * Verify `beta(n) - alpha(n) = n^(n+1)` using the routes in the
 * `LACASSE_ROUTE_*` bitmask (the closed form is always used).
 */
enum LacasseStatus lacasse_verify(int64_t n, uint32_t routes, struct LacasseReport **out);

/**
 * `n` of the report, or -1 for NULL.
 */
int64_t lacasse_report_n(const struct LacasseReport *report);

bool lacasse_report_passed(const struct LacasseReport *report);

/**
 * Bitmask of the routes that were actually compared.
 */
uint32_t lacasse_report_routes(const struct LacasseReport *report);

enum LacasseStatus lacasse_report_value(const struct LacasseReport *report,
                                        enum LacasseReportField field,
                                        char **out);

void lacasse_report_free(struct LacasseReport *report);

/**
 * The tree function `y(z)` through `z^order`.
 */
enum LacasseStatus lacasse_tree_series(int64_t order, struct LacasseSeries **out);

/**
 * `(1/(1-y))^d` through `z^min(order, order of y)`.
 */
enum LacasseStatus lacasse_geom_power(const struct LacasseSeries *y,
                                      int64_t d,
                                      int64_t order,
                                      struct LacasseSeries **out);

/**
 * Truncation order, or -1 for NULL.
 */
int64_t lacasse_series_order(const struct LacasseSeries *series);

/**
 * Coefficient of `z^index` as `p/q`.
 */
enum LacasseStatus lacasse_series_coeff(const struct LacasseSeries *series,
                                        int64_t index,
                                        char **out);

/**
 * `index! [z^index]` as `p/q` (an integer for the tree-function powers).
 */
enum LacasseStatus lacasse_series_egf_coeff(const struct LacasseSeries *series,
                                            int64_t index,
                                            char **out);

void lacasse_series_free(struct LacasseSeries *series);

/**
 * Solve `y = z e^y` for `0 <= z < 1/e`.
 */
enum LacasseStatus lacasse_tree_eval(double z, struct LacasseTreeEval *out);

/**
 * `Q(n)` rounded to the nearest double.
 */
enum LacasseStatus lacasse_q_float(int64_t n, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LACASSE_H */
