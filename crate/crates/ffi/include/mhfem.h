#ifndef MHFEM_H
#define MHFEM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MhfemStatus {
  MHFEM_STATUS_OK = 0,
  MHFEM_STATUS_NULL_POINTER = 1,
  MHFEM_STATUS_CONFIG = 2,
  MHFEM_STATUS_SOLVER = 3,
  MHFEM_STATUS_INVALID_ARGUMENT = 4,
  MHFEM_STATUS_IO = 5,
  MHFEM_STATUS_PANIC = 6,
} MhfemStatus;

// A problem together with its solver options.
typedef struct MhfemProblem MhfemProblem;

// Estimates for one mesh level.
typedef struct MhfemReport MhfemReport;

// One harmonic of a report. Exact-error fields are NaN when the problem
// has no exact solution.
typedef struct MhfemModeRow {
  size_t k;
  double r1;
  double r2;
  double majorant_semi;
  double majorant_norm;
  double exact_semi;
  double exact_norm;
  double eff_index;
  size_t iterations;
} MhfemModeRow;

// Space-time totals of a report. Exact-error fields are NaN when unknown.
typedef struct MhfemGlobalRow {
  size_t level;
  size_t dofs;
  double r1;
  double r2;
  double e_n;
  double majorant_semi;
  double majorant_norm;
  double exact_semi;
  double exact_norm;
  double eff_index;
} MhfemGlobalRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Built-in time-harmonic example.
//
// # Safety
// `out` must be valid for writing a pointer.
enum MhfemStatus mhfem_problem_example1(struct MhfemProblem **out);

// Built-in multiharmonic example.
//
// # Safety
// `out` must be valid for writing a pointer.
enum MhfemStatus mhfem_problem_example2(struct MhfemProblem **out);

// Problem from the text of a `key = value` configuration file. Output
// settings and levels in the text are ignored.
//
// # Safety
// `text` must be a NUL-terminated string and `out` valid for writing a pointer.
enum MhfemStatus mhfem_problem_from_config(const char *text, struct MhfemProblem **out);

// Relative residual reduction of the iterative solvers, in (0, 1).
//
// # Safety
// `problem` must be a live handle or null.
enum MhfemStatus mhfem_problem_set_tolerance(struct MhfemProblem *problem, double tol);

// # Safety
// `problem` must come from this library and not be used afterwards. Null is ignored.
void mhfem_problem_free(struct MhfemProblem *problem);

// Solves and estimates on the uniform mesh with `level` cells per side.
//
// # Safety
// `problem` must be a live handle and `out` valid for writing a pointer.
enum MhfemStatus mhfem_solve(const struct MhfemProblem *problem,
                             size_t level,
                             struct MhfemReport **out);

// Number of harmonics in the report, `N + 1`. Zero for a null handle.
//
// # Safety
// `report` must be a live handle or null.
size_t mhfem_report_num_modes(const struct MhfemReport *report);

// # Safety
// `report` must be a live handle and `out` valid for writing.
enum MhfemStatus mhfem_report_mode(const struct MhfemReport *report,
                                   size_t index,
                                   struct MhfemModeRow *out);

// # Safety
// `report` must be a live handle and `out` valid for writing.
enum MhfemStatus mhfem_report_global(const struct MhfemReport *report, struct MhfemGlobalRow *out);

// Writes the report as CSV, header included, replacing `path`.
//
// # Safety
// `report` must be a live handle and `path` a NUL-terminated string.
enum MhfemStatus mhfem_report_write_csv(const struct MhfemReport *report, const char *path);

// # Safety
// `report` must come from this library and not be used afterwards. Null is ignored.
void mhfem_report_free(struct MhfemReport *report);

// Message of the last failed call on this thread, empty after a success.
// The pointer stays valid until the next call into the library on this thread.
const char *mhfem_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MHFEM_H */
