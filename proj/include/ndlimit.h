/*
 * ndlimit C API.
 *
 * A spectral solver suite for L2-normalized states of the nonlinear Dirac
 * equation on a periodic box and their large-c Schroedinger limit. The C++
 * core lives behind this header: all types are opaque handles, all entry
 * points return status codes, and ndl_last_error() carries the most recent
 * error message for the calling thread.
 *
 * Status codes mirror the CLI exit codes: 0 success, 1 a run-level
 * assertion failed, 2 configuration/usage error, negative values are
 * internal faults.
 */
#ifndef NDLIMIT_H
#define NDLIMIT_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define NDL_OK 0
#define NDL_E_ASSERTION 1
#define NDL_E_CONFIG 2
#define NDL_E_INTERNAL (-1)

typedef struct ndl_config ndl_config;
typedef struct ndl_dirac_result ndl_dirac_result;
typedef struct ndl_nls_result ndl_nls_result;

const char* ndl_version(void);

/* Message describing the most recent failure on this thread ("" if none). */
const char* ndl_last_error(void);

/* ---- configuration ---------------------------------------------------- */

/* Parse a JSON run configuration (defaults applied, unknown keys rejected,
 * parameter windows enforced). On success *out owns a new handle. */
int ndl_config_parse(const char* json_text, ndl_config** out);

/* The all-defaults configuration. */
int ndl_config_default(ndl_config** out);

/* Canonical JSON serialization; free the returned string with
 * ndl_string_free. */
int ndl_config_to_json(const ndl_config* cfg, char** out_text);

/* Hex config fingerprint as embedded in output file headers. */
int ndl_config_hash(const ndl_config* cfg, char** out_text);

/* Override the master seed (the --seed flag). */
int ndl_config_set_seed(ndl_config* cfg, uint64_t seed);

void ndl_config_free(ndl_config* cfg);
void ndl_string_free(char* text);

/* ---- command dispatch -------------------------------------------------- */

/* Run one of: "solve-dirac", "solve-nls", "limit-sweep",
 * "check-inequalities", "decay-fit". Artifacts are written into out_dir.
 * trace_path (nullable) enables per-iteration solver traces; input_path
 * (nullable) names the snapshot consumed by decay-fit. */
int ndl_run(const ndl_config* cfg, const char* command, const char* out_dir,
            const char* trace_path, const char* input_path);

/* ---- direct solves ------------------------------------------------------ */

/* Solve the constrained Dirac problem at light speed c (overriding the
 * config's params.c). */
int ndl_solve_dirac(const ndl_config* cfg, double c, ndl_dirac_result** out);

double ndl_dirac_result_omega(const ndl_dirac_result* r);
double ndl_dirac_result_energy(const ndl_dirac_result* r);
double ndl_dirac_result_residual(const ndl_dirac_result* r);
int ndl_dirac_result_converged(const ndl_dirac_result* r);
int ndl_dirac_result_outer_iterations(const ndl_dirac_result* r);
/* Write the solution spinor as a DSPN snapshot. */
int ndl_dirac_result_save_field(const ndl_dirac_result* r, const char* path);
void ndl_dirac_result_free(ndl_dirac_result* r);

/* Ground state of the limit Schroedinger problem (two independent starts). */
int ndl_solve_nls(const ndl_config* cfg, ndl_nls_result** out);

double ndl_nls_result_nu(const ndl_nls_result* r);
double ndl_nls_result_energy(const ndl_nls_result* r);
double ndl_nls_result_residual(const ndl_nls_result* r);
int ndl_nls_result_converged(const ndl_nls_result* r);
int ndl_nls_result_iterations(const ndl_nls_result* r);
int ndl_nls_result_save_field(const ndl_nls_result* r, const char* path);
void ndl_nls_result_free(ndl_nls_result* r);

/* ---- snapshots ---------------------------------------------------------- */

/* Header of a DSPN field snapshot. */
int ndl_snapshot_info(const char* path, uint32_t* n, uint32_t* components,
                      double* half_width);

#ifdef __cplusplus
}
#endif

#endif /* NDLIMIT_H */
