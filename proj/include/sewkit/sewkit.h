#ifndef SEWKIT_SEWKIT_H
#define SEWKIT_SEWKIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(SEWKIT_BUILDING_LIBRARY)
#define SEWKIT_API __attribute__((visibility("default")))
#else
#define SEWKIT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sewkit_status {
  SEWKIT_OK = 0,
  SEWKIT_INVALID_ARGUMENT = 1,
  SEWKIT_DOMAIN = 2,
  SEWKIT_LEVEL_OVERFLOW = 3,
  SEWKIT_OFF_GRID = 4,
  SEWKIT_UNSUPPORTED = 5,
  SEWKIT_DEGENERATE = 6,
  SEWKIT_BUDGET = 7,
  SEWKIT_IO = 8,
  SEWKIT_CONFIG = 9,
  SEWKIT_INTERNAL = 10
} sewkit_status;

typedef struct sewkit_control sewkit_control;
typedef struct sewkit_fbm_path sewkit_fbm_path;
typedef struct sewkit_grid sewkit_grid;

/* Message of the last failed call on this thread; never NULL. */
SEWKIT_API const char* sewkit_last_error(void);
SEWKIT_API const char* sewkit_status_name(int status);
SEWKIT_API const char* sewkit_version(void);

/* Controls */
SEWKIT_API int sewkit_control_linear(double horizon, sewkit_control** out);
SEWKIT_API int sewkit_control_power(double horizon, double scale, double kappa, sewkit_control** out);
SEWKIT_API int sewkit_control_besov_data(double horizon, const double* profile, size_t cells, double theta,
                                         double hurst, double gamma, sewkit_control** out);
/* values: (n+1)*(n+1) row-major samples on the uniform grid of [0, horizon]. */
SEWKIT_API int sewkit_control_tabulated(double horizon, size_t n, const double* values, sewkit_control** out);
SEWKIT_API int sewkit_control_from_json(const char* json, sewkit_control** out);
SEWKIT_API void sewkit_control_free(sewkit_control* c);
SEWKIT_API int sewkit_control_eval(const sewkit_control* c, double s, double t, double* out);
SEWKIT_API int sewkit_control_midpoint(const sewkit_control* c, double s, double t, double* out);
/* Writes the 2^level + 1 w-dyadic points of [s,t]; *count receives the number
   needed even when capacity is too small (then SEWKIT_INVALID_ARGUMENT). */
SEWKIT_API int sewkit_control_dyadic_points(const sewkit_control* c, double s, double t, int level, double* out,
                                            size_t capacity, size_t* count);
SEWKIT_API int sewkit_control_mesh(const sewkit_control* c, const double* points, size_t n, double* out);
SEWKIT_API int sewkit_control_check_superadditive(const sewkit_control* c, size_t grid_n, double* max_violation,
                                                  double witness[3]);

/* Sewing */
typedef struct sewkit_germ_bounds {
  double gamma1, eps1, gamma2, eps2, gamma3, eps3, p_hat, m, n;
} sewkit_germ_bounds;

SEWKIT_API int sewkit_rate_bound(const sewkit_germ_bounds* b, const sewkit_control* c, double s, double t,
                                 double mesh_w, double C, double* out);
/* Both sides of the allocation identity; table is n_points x n_points
   row-major with table[i*n_points+j] = A(t_i, t_j) for i < j. */
SEWKIT_API int sewkit_allocation_identity(const sewkit_control* c, const double* points, size_t n_points,
                                          const double* table, double* lhs, double* rhs, double* relative_error);

/* Fractional Brownian motion. past <= 0 selects 8 * horizon. */
SEWKIT_API int sewkit_fbm_simulate(double hurst, size_t dim, double horizon, double past, size_t steps,
                                   uint64_t seed, sewkit_fbm_path** out);
SEWKIT_API void sewkit_fbm_free(sewkit_fbm_path* p);
SEWKIT_API size_t sewkit_fbm_steps(const sewkit_fbm_path* p);
SEWKIT_API int sewkit_fbm_value(const sewkit_fbm_path* p, size_t coord, double t, double* out);
SEWKIT_API int sewkit_fbm_conditional_mean(const sewkit_fbm_path* p, size_t coord, double u, double v, double* out);
SEWKIT_API int sewkit_fbm_write_csv(const sewkit_fbm_path* p, const char* path);
SEWKIT_API int sewkit_rho(double hurst, double u, double v, double* out);

/* Periodic grid functions on [-L, L)^dim with n points per axis. */
SEWKIT_API int sewkit_grid_create(int dim, size_t n, double half_period, const double* re, const double* im,
                                  sewkit_grid** out);
SEWKIT_API int sewkit_grid_dirac(int dim, size_t n, double half_period, sewkit_grid** out);
SEWKIT_API void sewkit_grid_free(sewkit_grid* g);
SEWKIT_API size_t sewkit_grid_size(const sewkit_grid* g);
SEWKIT_API int sewkit_grid_values(const sewkit_grid* g, double* re, double* im, size_t capacity);
SEWKIT_API int sewkit_grid_heat(const sewkit_grid* g, double kappa, sewkit_grid** out);
SEWKIT_API int sewkit_grid_shift(const sewkit_grid* g, const double* y, sewkit_grid** out);
SEWKIT_API int sewkit_grid_lp_block(const sewkit_grid* g, int j, sewkit_grid** out, int* beyond_nyquist);
SEWKIT_API int sewkit_grid_besov_norm(const sewkit_grid* g, double alpha, double p, double q, double* out);
SEWKIT_API int sewkit_grid_write_binary(const sewkit_grid* g, const char* path);
SEWKIT_API int sewkit_grid_read_binary(const char* path, sewkit_grid** out);
SEWKIT_API int sewkit_grid_write_csv(const sewkit_grid* g, const char* path);

/* Exponent budget. Infinite indices are passed as INFINITY. */
SEWKIT_API int sewkit_regularity_budget(double hurst, int dim, double theta, double alpha, double p, double q,
                                        double* gamma_max, double* beta_max, double* p_hat);

/* Martingale type ratio of the sign martingale in l^p(R^depth). */
SEWKIT_API int sewkit_sign_martingale_type_ratio(size_t depth, double p, double p_hat, double m, double* out);

/* Experiments */
/* Comma-separated experiment names. */
SEWKIT_API const char* sewkit_experiment_names(void);
/* Runs an experiment and writes its artifacts to out_dir. seed may be NULL
   to keep the configuration's seed. The summary JSON is copied to
   summary (truncated to capacity, always NUL-terminated) when non-NULL;
   *summary_len receives the full length. */
SEWKIT_API int sewkit_run_experiment(const char* name, const char* config_json, const uint64_t* seed,
                                     const char* out_dir, unsigned workers, char* summary, size_t capacity,
                                     size_t* summary_len);

#ifdef __cplusplus
}
#endif

#endif
