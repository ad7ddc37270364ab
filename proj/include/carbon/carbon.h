#ifndef CARBON_CARBON_H
#define CARBON_CARBON_H

#include <stddef.h>

#if defined(_WIN32)
#define CB_API __declspec(dllexport)
#else
#define CB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cb_status {
  CB_OK = 0,
  CB_ERR_DOMAIN = 1,
  CB_ERR_CONFIG = 2,
  CB_ERR_CONVERGENCE = 3,
  CB_ERR_INSTABILITY = 4,
  CB_ERR_MECHANISM = 5,
  CB_ERR_MISSING_ALLOWANCE = 6,
  CB_ERR_GRID_MISMATCH = 7,
  CB_ERR_IO = 8,
  CB_ERR_ARGUMENT = 9,
  CB_ERR_INTERNAL = 10
} cb_status;

typedef struct cb_config cb_config;
typedef struct cb_history cb_history;

typedef struct cb_grid_info {
  int n_d;
  int n_e;
  int n_t;
  double xi_max;
  double e_max;
  double horizon;
  size_t levels; /* retained time levels */
} cb_grid_info;

typedef struct cb_mc_result {
  double penalty;
  double mean_emissions;
  double std_error;
} cb_mc_result;

#define CB_MAX_LEVELS 8

typedef struct cb_convergence {
  int first_level;
  int last_level;
  int n_pairs;
  double e_max; /* E extent shared by every level */
  double mesh_width[CB_MAX_LEVELS];
  double err_inf[CB_MAX_LEVELS];
  double err_one[CB_MAX_LEVELS];
  double rate_inf;
} cb_convergence;

/* Message of the last failed call on this thread ("" after success). */
CB_API const char* cb_last_error(void);
CB_API const char* cb_status_name(cb_status status);

/* Configuration. Keys are addressed as (section, key), e.g. ("scheme.period1", "e_cap"). */
CB_API cb_status cb_config_default(cb_config** out);
CB_API cb_status cb_config_load(const char* path, cb_config** out);
/* format is "ini" or "json" */
CB_API cb_status cb_config_parse(const char* text, const char* format, cb_config** out);
CB_API cb_status cb_config_clone(const cb_config* cfg, cb_config** out);
CB_API void cb_config_free(cb_config* cfg);
CB_API cb_status cb_config_set(cb_config* cfg, const char* section, const char* key, const char* value);
/* Copies a NUL-terminated value into buf. *needed (if given) receives the
 * required size including the terminator; a short buffer yields CB_ERR_ARGUMENT. */
CB_API cb_status cb_config_get(const cb_config* cfg, const char* section, const char* key,
                               char* buf, size_t len, size_t* needed);
CB_API cb_status cb_config_validate(const cb_config* cfg);
/* Resolved parameters as JSON, same buffer contract as cb_config_get. */
CB_API cb_status cb_config_echo_json(const cb_config* cfg, char* buf, size_t len, size_t* needed);

/* Merit order of the configured stack. */
CB_API cb_status cb_active_set(const cb_config* cfg, double a, double d, double* lo, double* hi);
CB_API cb_status cb_electricity_price(const cb_config* cfg, double a, double d, double* out);
CB_API cb_status cb_emissions_rate(const cb_config* cfg, double a, double d, double* out);
CB_API cb_status cb_bau_emissions_rate(const cb_config* cfg, double d, double* out);

/* Single-period allowance price; keeps every stride-th time level. */
CB_API cb_status cb_price_allowance(const cb_config* cfg, int stride, cb_history** out);
/* Two-period market: first-period price and the stored second-period slice
 * alpha2(T1, D, 0; E1) (E1 along the E axis). Either output may be NULL. */
CB_API cb_status cb_price_allowance_2p(const cb_config* cfg, int stride, cb_history** alpha1,
                                       cb_history** alpha2_at_t1);
/* European call with the configured strike and maturity. The allowance
 * surfaces are returned through allowance when it is not NULL. */
CB_API cb_status cb_price_call(const cb_config* cfg, int stride, cb_history** call,
                               cb_history** allowance);

CB_API cb_status cb_history_info(const cb_history* h, cb_grid_info* out);
CB_API cb_status cb_history_level_time(const cb_history* h, size_t level, double* t);
CB_API cb_status cb_history_value(const cb_history* h, size_t level, int i, int j, double* out);
/* Bilinear in (d, e) on the latest retained level at or below t. */
CB_API cb_status cb_history_evaluate(const cb_history* h, double t, double d, double e, double* out);
/* Writes `t,D,E,value` rows for the levels nearest to times[0..n_times);
 * times == NULL writes every retained level. */
CB_API cb_status cb_history_write_csv(const cb_history* h, const char* path, const double* times,
                                      size_t n_times);
CB_API cb_status cb_history_write_grid_json(const cb_history* h, const char* path);
CB_API void cb_history_free(cb_history* h);

/* One allowance solve and one path simulation per penalty. */
CB_API cb_status cb_simulate_emissions(const cb_config* cfg, const double* penalties, size_t n,
                                       cb_mc_result* out);

/* Refinement study over reference levels first..last (1-based). */
CB_API cb_status cb_convergence_study(const cb_config* cfg, int first_level, int last_level,
                                      cb_convergence* out);

#ifdef __cplusplus
}
#endif

#endif
