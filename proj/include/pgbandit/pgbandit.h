/* C interface to the pgbandit library.
 *
 * Every function returns a pgb_status. On failure the message of the most
 * recent error on the calling thread is available from pgb_last_error(), and
 * a machine-readable JSON object from pgb_last_error_json(). Handles are
 * opaque and owned by the caller; release them with the matching _destroy.
 */
#ifndef PGBANDIT_H
#define PGBANDIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PGB_API __declspec(dllexport)
#else
#define PGB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pgb_status {
  PGB_OK = 0,
  PGB_ERR_INVALID_ARGUMENT = 1,
  PGB_ERR_DIMENSION = 2,
  PGB_ERR_SIMPLEX = 3,
  PGB_ERR_INTEGRATION = 4,
  PGB_ERR_CONFIG = 5,
  PGB_ERR_IO = 6,
  PGB_ERR_FIT = 7,
  PGB_ERR_NULL_POINTER = 8,
  PGB_ERR_BUFFER_TOO_SMALL = 9,
  PGB_ERR_INTERNAL = 99
} pgb_status;

typedef struct pgb_instance pgb_instance;
typedef struct pgb_config pgb_config;
typedef struct pgb_result pgb_result;

PGB_API const char* pgb_version(void);
PGB_API const char* pgb_last_error(void);
PGB_API const char* pgb_last_error_json(void);

/* Bandit instances */
PGB_API pgb_status pgb_instance_create(const double* means, size_t arms, pgb_instance** out);
PGB_API void pgb_instance_destroy(pgb_instance* instance);
PGB_API pgb_status pgb_instance_arms(const pgb_instance* instance, size_t* arms);
PGB_API pgb_status pgb_instance_optimal_arm(const pgb_instance* instance, size_t* arm);
PGB_API pgb_status pgb_instance_gaps(const pgb_instance* instance, double* gaps, size_t capacity);

/* Policy primitives (arrays of length `arms`) */
PGB_API pgb_status pgb_softmax(const double* weights, size_t arms, double* probs);
/* In-place SAMBA update of `probs`; the leader is recomputed from probs. */
PGB_API pgb_status pgb_samba_step(double* probs, size_t arms, double alpha, size_t played_arm, int reward);
PGB_API pgb_status pgb_closed_form_samba(double p0, double gap, double alpha, double t, double* out);
PGB_API pgb_status pgb_theorem1_regret_bound(double p_star_floor, double rg0, double alpha, double t, double* out);
PGB_API pgb_status pgb_theorem2_regret_bound(const pgb_instance* instance, double alpha, double horizon, double* out);
/* Outputs may be NULL when not wanted. */
PGB_API pgb_status pgb_regret_diagnostics(const pgb_instance* instance, const double* probs, double alpha,
                                          double* rg, double* decay_norm_sq, double* decay_identity_residual,
                                          double* theorem1_bound_slack);

/* Experiment configuration */
PGB_API pgb_status pgb_config_create(pgb_config** out);
PGB_API pgb_status pgb_config_from_json(const char* json, pgb_config** out);
PGB_API pgb_status pgb_config_from_file(const char* path, pgb_config** out);
/* CLI-style override: key is a flag name without dashes (means, algorithm,
 * alpha0, schedule, baseline, horizon, dt, replications, seed, checkpoints, out). */
PGB_API pgb_status pgb_config_set(pgb_config* config, const char* key, const char* value);
PGB_API pgb_status pgb_config_validate(const pgb_config* config);
/* Writes the NUL-terminated JSON form into buf. *needed receives the
 * required size including the terminator, even when buf is too small. */
PGB_API pgb_status pgb_config_to_json(const pgb_config* config, char* buf, size_t capacity, size_t* needed);
PGB_API pgb_status pgb_config_output_dir(const pgb_config* config, char* buf, size_t capacity, size_t* needed);
PGB_API void pgb_config_destroy(pgb_config* config);

/* Experiments */
PGB_API pgb_status pgb_run_experiment(const pgb_config* config, pgb_result** out);
PGB_API pgb_status pgb_result_checkpoint_count(const pgb_result* result, size_t* count);
PGB_API pgb_status pgb_result_checkpoint(const pgb_result* result, size_t index, double* time, double* mean_rg,
                                         double* mean_regret, double* std_regret, double* theorem_bound);
/* Returns PGB_ERR_FIT when the run had too few checkpoints to fit. */
PGB_API pgb_status pgb_result_fit(const pgb_result* result, double* log_slope, double* predicted_slope,
                                  double* ratio);
PGB_API pgb_status pgb_result_emit(const pgb_result* result, const char* output_dir, int per_replication,
                                   int plot);
PGB_API void pgb_result_destroy(pgb_result* result);

#ifdef __cplusplus
}
#endif

#endif /* PGBANDIT_H */
