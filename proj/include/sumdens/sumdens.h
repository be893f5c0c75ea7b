/* C interface to the sumdens library. Every function returns an sd_status;
 * on failure sd_last_error() describes the problem (per thread). Handles are
 * opaque and owned by the caller, who frees them with the matching destroy
 * function. */
#ifndef SUMDENS_SUMDENS_H
#define SUMDENS_SUMDENS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SD_API __declspec(dllexport)
#else
#define SD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sd_status {
  SD_OK = 0,
  SD_ERR_INVALID_ARGUMENT = 1,
  SD_ERR_DOMAIN = 2,
  SD_ERR_CAPABILITY = 3,
  SD_ERR_IO = 4,
  SD_ERR_INTERNAL = 5
} sd_status;

SD_API const char* sd_last_error(void);
SD_API const char* sd_version(void);

/* Experiment configuration. Names: clayton_weibull, gumbel_exponential,
 * frank_lognormal, gauss_lognormal, custom.
 *
 * Integer keys:  n, R, seed, grid_points, workers, prepass, timing (0/1)
 * Real keys:     grid_min, grid_max, pilot_frac, rho, theta
 * String keys:   methods ("sensitivity,cond,..."), copula, marginals
 *                (';'-separated specs such as "weibull:0.3,1"), grid_values
 *                (comma-separated), spacing (auto|linear|log), uniforms
 *                (common|independent) */
typedef struct sd_config sd_config;

SD_API sd_status sd_config_create(const char* experiment, sd_config** out);
SD_API void sd_config_destroy(sd_config* cfg);
SD_API sd_status sd_config_set_int(sd_config* cfg, const char* key, int64_t value);
SD_API sd_status sd_config_set_double(sd_config* cfg, const char* key, double value);
SD_API sd_status sd_config_set_string(sd_config* cfg, const char* key, const char* value);

/* Bayesian logistic-regression pipeline on the Pima data.
 *
 * Integer keys:  burn_in, keep, benchmark_steps, benchmark_thin, seed,
 *                grid_points, batches, timing (0/1), full (0/1)
 * Real keys:     step_var, shift, pilot_frac
 * String keys:   data, coef */
typedef struct sd_bayes_config sd_bayes_config;

SD_API sd_status sd_bayes_config_create(sd_bayes_config** out);
SD_API void sd_bayes_config_destroy(sd_bayes_config* cfg);
SD_API sd_status sd_bayes_config_set_int(sd_bayes_config* cfg, const char* key, int64_t value);
SD_API sd_status sd_bayes_config_set_double(sd_bayes_config* cfg, const char* key, double value);
SD_API sd_status sd_bayes_config_set_string(sd_bayes_config* cfg, const char* key,
                                            const char* value);

/* Result table: rows of (s, method, estimate, std_error, sqrt_wnrv) plus a
 * JSON metadata object. */
typedef struct sd_result sd_result;

SD_API sd_status sd_run_experiment(const sd_config* cfg, sd_result** out);
SD_API sd_status sd_run_bayes(const sd_bayes_config* cfg, sd_result** out);
SD_API size_t sd_result_rows(const sd_result* res);
/* Any output pointer may be NULL. The method string lives as long as res. */
SD_API sd_status sd_result_row(const sd_result* res, size_t index, double* s, const char** method,
                               double* estimate, double* std_error, double* sqrt_wnrv);
/* JSON text owned by res. */
SD_API const char* sd_result_metadata(const sd_result* res);
/* format: "csv" or "json"; path "-" writes to stdout. */
SD_API sd_status sd_result_write(const sd_result* res, const char* path, const char* format);
SD_API void sd_result_destroy(sd_result* res);

/* Joint model of n marginals under a copula: "independence", "clayton",
 * "gumbel", "frank" (param = theta) or "gaussian" (equicorrelated,
 * param = rho). */
typedef struct sd_model sd_model;

SD_API sd_status sd_model_create(const char* copula, double param, size_t n,
                                 const char* const* marginal_specs, sd_model** out);
SD_API void sd_model_destroy(sd_model* model);
SD_API sd_status sd_model_log_density(const sd_model* model, const double* x, size_t n,
                                      double* out);
/* Writes the n-vector grad log f(x) to out. */
SD_API sd_status sd_model_score(const sd_model* model, const double* x, size_t n, double* out);

#ifdef __cplusplus
}
#endif

#endif
