/*
 * lossfluid C API
 *
 * Simulation of the M_t/G/n/n loss system, numerical solution of its fluid
 * limit, and the comparison between the two. All objects are opaque handles
 * released with the matching *_free function. Every call returns an
 * lf_status; on failure lf_last_error() describes the problem for the
 * calling thread until the next failing call.
 */
#ifndef LOSSFLUID_H
#define LOSSFLUID_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(LOSSFLUID_BUILDING)
#    define LOSSFLUID_API __declspec(dllexport)
#  else
#    define LOSSFLUID_API __declspec(dllimport)
#  endif
#else
#  define LOSSFLUID_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lf_status {
  LF_OK = 0,
  LF_ERR_DOMAIN = 1,           /* argument outside the operation's domain */
  LF_ERR_VALIDATION = 2,       /* model parameters rejected */
  LF_ERR_PARSE = 3,            /* malformed config or data file */
  LF_ERR_UNSUPPORTED = 4,      /* operation undefined for this configuration */
  LF_ERR_UNDEFINED_RATIO = 5,  /* ratio with zero denominator */
  LF_ERR_IO = 6,
  LF_ERR_NULL_ARGUMENT = 7,
  LF_ERR_INTERNAL = 8
} lf_status;

typedef enum lf_subcommand {
  LF_CMD_SIMULATE = 0,
  LF_CMD_FLUID = 1,
  LF_CMD_COMPARE = 2,
  LF_CMD_BLOCKED = 3
} lf_subcommand;

typedef struct lf_config lf_config;
typedef struct lf_path lf_path;
typedef struct lf_fluid lf_fluid;
typedef struct lf_regimes lf_regimes;

LOSSFLUID_API const char* lf_version(void);
LOSSFLUID_API const char* lf_status_name(lf_status status);
LOSSFLUID_API const char* lf_last_error(void);

/* ---- configuration ---------------------------------------------------- */

LOSSFLUID_API lf_status lf_config_load(const char* file, lf_config** out);
LOSSFLUID_API lf_status lf_config_parse(const char* yaml_text, lf_config** out);
LOSSFLUID_API void lf_config_free(lf_config* config);

LOSSFLUID_API lf_status lf_config_horizon(const lf_config* config, double* out);
LOSSFLUID_API lf_status lf_config_step(const lf_config* config, double* out);
LOSSFLUID_API lf_status lf_config_tol_pin(const lf_config* config, double* out);
/* Output directory named in the config; empty string when absent. */
LOSSFLUID_API lf_status lf_config_output_dir(const lf_config* config, const char** out);
LOSSFLUID_API lf_status lf_config_capacity_count(const lf_config* config, size_t* out);
LOSSFLUID_API lf_status lf_config_capacity(const lf_config* config, size_t index, int* out);

/* ---- simulation ------------------------------------------------------- */

LOSSFLUID_API lf_status lf_simulate(const lf_config* config, int capacity, uint64_t seed, lf_path** out);
LOSSFLUID_API void lf_path_free(lf_path* path);

LOSSFLUID_API lf_status lf_path_event_count(const lf_path* path, size_t* out);
LOSSFLUID_API lf_status lf_path_blocked_count(const lf_path* path, size_t* out);
LOSSFLUID_API lf_status lf_path_occupancy(const lf_path* path, double t, double* out);
LOSSFLUID_API lf_status lf_path_integrated(const lf_path* path, double t, double* out);
LOSSFLUID_API lf_status lf_path_blocked(const lf_path* path, double t, double* out);
LOSSFLUID_API lf_status lf_path_idleness(const lf_path* path, double t, double* out);
/* Requires r0 = 0 in the config the path was simulated from. */
LOSSFLUID_API lf_status lf_path_residual(const lf_path* path, double t, double* out);
LOSSFLUID_API lf_status lf_path_write_events(const lf_path* path, const char* file);

/* ---- fluid limit ------------------------------------------------------ */

/* step <= 0 selects the configured step. */
LOSSFLUID_API lf_status lf_fluid_solve(const lf_config* config, double step, lf_fluid** out);
LOSSFLUID_API lf_status lf_fluid_solve_mollified(const lf_config* config, double step, double width, lf_fluid** out);
LOSSFLUID_API void lf_fluid_free(lf_fluid* fluid);

LOSSFLUID_API lf_status lf_fluid_mesh_size(const lf_fluid* fluid, size_t* out);
LOSSFLUID_API lf_status lf_fluid_rho(const lf_fluid* fluid, double t, double* out);
LOSSFLUID_API lf_status lf_fluid_integrated(const lf_fluid* fluid, double t, double* out);
LOSSFLUID_API lf_status lf_fluid_integrated_explicit(const lf_fluid* fluid, double t, double* out);
LOSSFLUID_API lf_status lf_fluid_blocked(const lf_fluid* fluid, double t, double* out);
LOSSFLUID_API lf_status lf_fluid_congestion_ratio(const lf_fluid* fluid, double t, double* out);
LOSSFLUID_API lf_status lf_fluid_idleness(const lf_fluid* fluid, double t, double* out);
LOSSFLUID_API lf_status lf_fluid_write_csv(const lf_fluid* fluid, const char* file);

/* Uniform distance between a simulated path and a fluid solution. */
LOSSFLUID_API lf_status lf_sup_error(const lf_path* path, const lf_fluid* fluid, double* out);

/* ---- regime structure -------------------------------------------------- */

/* tol_pin <= 0 selects the configured tolerance. */
LOSSFLUID_API lf_status lf_regimes_compute(const lf_fluid* fluid, double tol_pin, lf_regimes** out);
LOSSFLUID_API void lf_regimes_free(lf_regimes* regimes);

LOSSFLUID_API lf_status lf_regimes_sigma0(const lf_regimes* regimes, double* out);
/* Number of hitting times tau_1, tau_2, ... */
LOSSFLUID_API lf_status lf_regimes_count(const lf_regimes* regimes, size_t* out);
/* k is 1-based; sigma is +inf when the system is still pinned at T. */
LOSSFLUID_API lf_status lf_regimes_get(const lf_regimes* regimes, size_t k, double* tau, double* sigma);
LOSSFLUID_API lf_status lf_regimes_reconstruct(const lf_regimes* regimes, double t, double* out);
LOSSFLUID_API lf_status lf_regimes_write_csv(const lf_regimes* regimes, const char* file);

/* ---- batch runs --------------------------------------------------------- */

/*
 * Runs one subcommand and writes its CSV files to output_dir (created when
 * missing). When summary is non-NULL it receives a newly allocated digest that
 * must be released with lf_string_free.
 */
LOSSFLUID_API lf_status lf_run(const lf_config* config, lf_subcommand command, const char* output_dir,
                               int emit_plot_data, char** summary);
LOSSFLUID_API void lf_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* LOSSFLUID_H */
