#ifndef MSVORTEX_H
#define MSVORTEX_H

/* C interface to the radial vortex solver. All handles are opaque; every
 * function that can fail returns an msv_status and records a message that
 * msv_last_error() returns (per thread, valid until the next failing call). */

#include <stddef.h>

#if defined(MSV_BUILDING_LIBRARY)
#define MSV_API __attribute__((visibility("default")))
#else
#define MSV_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum msv_status {
  MSV_OK = 0,
  MSV_HELP = 1,              /* --help was given; msv_last_error() holds the usage text */
  MSV_ERR_CONFIG = 2,        /* invalid flag, parameter, shape or domain */
  MSV_ERR_IO = 3,            /* file could not be read or written */
  MSV_ERR_NONCONVERGENCE = 4, /* a solver stage failed to converge */
  MSV_ERR_EVALUATION = 5,    /* NaN or Inf during evaluation */
  MSV_ERR_INTERNAL = 6,      /* unexpected exception */
  MSV_ERR_INVALID_HANDLE = 7 /* null handle or output pointer */
} msv_status;

typedef struct msv_config msv_config;
typedef struct msv_run msv_run;

MSV_API const char* msv_version(void);
MSV_API const char* msv_last_error(void);
/* Process exit code for a status: 0 for MSV_OK and MSV_HELP, otherwise the
 * stable code of the error class (2 config, 3 I/O, 4 non-convergence,
 * 5 evaluation, 1 other). */
MSV_API int msv_status_exit_code(msv_status status);

MSV_API msv_status msv_config_create(msv_config** out);
/* Parses command-line flags; argv[0] is the program name. */
MSV_API msv_status msv_config_from_args(int argc, const char* const* argv, msv_config** out);
MSV_API void msv_config_free(msv_config* cfg);
/* Keys: k, n, path_len, max_iter. */
MSV_API msv_status msv_config_set_int(msv_config* cfg, const char* key, int value);
/* Keys: p, lambda, eps_start, eps_end, eps_factor, rmax, gamma, grad_tol,
 * newton_tol, residual_tol. */
MSV_API msv_status msv_config_set_double(msv_config* cfg, const char* key, double value);
/* Keys: method, profile_out, report_out, seed_profile. */
MSV_API msv_status msv_config_set_string(msv_config* cfg, const char* key, const char* value);
/* Output paths; NULL when unset. */
MSV_API const char* msv_config_profile_out(const msv_config* cfg);
MSV_API const char* msv_config_report_out(const msv_config* cfg);

/* Validates the configuration and runs the selected method. */
MSV_API msv_status msv_solve(const msv_config* cfg, msv_run** out);
MSV_API void msv_run_free(msv_run* run);

/* Keys: eps, energy, level, K, c_bar, norm_bound, flux, min_u, grad_norm,
 * residual_sup, norm_h1, mpa_level, mpa_iterations, extrapolation_gap,
 * oracle_a, oracle_beta, oracle_mass, oracle_sup_du, oracle_sup_db,
 * oracle_energy_rel, seconds. Keys that do not apply to the method that
 * ran return MSV_ERR_CONFIG. */
MSV_API msv_status msv_run_get_double(const msv_run* run, const char* key, double* out);
MSV_API size_t msv_run_node_count(const msv_run* run);
/* Copies the final profile; each non-null array must hold `count` values
 * and `count` must equal msv_run_node_count. */
MSV_API msv_status msv_run_copy_profile(const msv_run* run, double* r, double* u, double* b, size_t count);
MSV_API msv_status msv_run_write_profile(const msv_run* run, const char* path);
MSV_API msv_status msv_run_write_report(const msv_run* run, const char* path);

#ifdef __cplusplus
}
#endif

#endif
