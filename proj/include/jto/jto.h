/* C interface to the journey-to-overdose analysis library. */
#ifndef JTO_JTO_H
#define JTO_JTO_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(JTO_BUILDING_LIBRARY)
#    define JTO_API __declspec(dllexport)
#  else
#    define JTO_API __declspec(dllimport)
#  endif
#else
#  define JTO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum jto_status {
  JTO_OK = 0,
  JTO_ERR_CONFIG = 1,
  JTO_ERR_DATA = 2,
  JTO_ERR_NUMERIC = 3,
  JTO_ERR_INVALID_ARGUMENT = 4,
  JTO_ERR_INTERNAL = 5
} jto_status;

/* Message of the last failing call on this thread; "" when none. */
JTO_API const char* jto_last_error(void);
JTO_API const char* jto_version(void);

/* Pipeline over a JSON configuration document. out_dir may be NULL when the
   document carries an "out" key. */
typedef struct jto_pipeline jto_pipeline;

JTO_API jto_status jto_pipeline_create(const char* config_json, const char* out_dir, jto_pipeline** out);
JTO_API void jto_pipeline_destroy(jto_pipeline* p);
JTO_API jto_status jto_pipeline_run(jto_pipeline* p);
/* stage: synth, ingest, network, geo, fit or report. */
JTO_API jto_status jto_pipeline_run_stage(jto_pipeline* p, const char* stage);
JTO_API size_t jto_pipeline_warning_count(const jto_pipeline* p);
JTO_API const char* jto_pipeline_warning(const jto_pipeline* p, size_t i);

JTO_API double jto_haversine_miles(double lat1, double lon1, double lat2, double lon2);
JTO_API double jto_effect_percent(double b);
JTO_API double jto_sd_effect_percent(double b, double sd);

typedef struct jto_dispersion {
  double mean;
  double variance;
  double ratio;
  int overdispersed;
} jto_dispersion;

JTO_API jto_status jto_dispersion_check(const double* y, size_t n, jto_dispersion* out);

/* Negative binomial (NB2) fit. x is row-major n_rows x n_cols and must include
   the intercept column. fixed_theta <= 0 estimates theta. */
typedef struct jto_nbfit jto_nbfit;

typedef struct jto_nb_options {
  int max_outer_iterations;
  double tolerance;
  double fixed_theta;
} jto_nb_options;

JTO_API jto_nb_options jto_nb_default_options(void);
JTO_API jto_status jto_nb_fit(const double* x, const double* y, size_t n_rows, size_t n_cols,
                              const jto_nb_options* options, jto_nbfit** out);
JTO_API void jto_nbfit_destroy(jto_nbfit* fit);
JTO_API size_t jto_nbfit_size(const jto_nbfit* fit);
/* Each copies jto_nbfit_size() values into dst. */
JTO_API void jto_nbfit_beta(const jto_nbfit* fit, double* dst);
JTO_API void jto_nbfit_se(const jto_nbfit* fit, double* dst);
JTO_API void jto_nbfit_z(const jto_nbfit* fit, double* dst);
JTO_API void jto_nbfit_p(const jto_nbfit* fit, double* dst);
JTO_API double jto_nbfit_theta(const jto_nbfit* fit);
JTO_API double jto_nbfit_log_likelihood(const jto_nbfit* fit);
JTO_API int jto_nbfit_iterations(const jto_nbfit* fit);
JTO_API int jto_nbfit_converged(const jto_nbfit* fit);

#ifdef __cplusplus
}
#endif

#endif
