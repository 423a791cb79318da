#ifndef LFD_LFD_H
#define LFD_LFD_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define LFD_API __declspec(dllexport)
#else
#define LFD_API __attribute__((visibility("default")))
#endif

typedef enum lfd_status {
    LFD_OK = 0,
    LFD_ERR_INVALID_ARGUMENT = 1,
    LFD_ERR_DOMAIN = 2,
    LFD_ERR_DEGENERATE = 3,
    LFD_ERR_SATURATION = 4,
    LFD_ERR_NUMERICAL = 5,
    LFD_ERR_INTERNAL = 6
} lfd_status;

typedef struct lfd_grid lfd_grid;
typedef struct lfd_state lfd_state;
typedef struct lfd_reports lfd_reports;
typedef struct lfd_trajectory lfd_trajectory;

LFD_API const char* lfd_version(void);
/* Message of the last failed call on this thread; empty after a success. */
LFD_API const char* lfd_last_error(void);
LFD_API const char* lfd_status_name(lfd_status s);

/* threads <= 0 keeps the OpenMP default (or LFD_THREADS). */
LFD_API lfd_status lfd_set_threads(int threads);
/* Nonzero selects fixed-order pairwise reductions (bit-reproducible across thread counts). */
LFD_API lfd_status lfd_set_deterministic(int on);

/* ---- grid ---- */
LFD_API lfd_status lfd_grid_create(int n, double extent, lfd_grid** out);
LFD_API void lfd_grid_destroy(lfd_grid* g);
LFD_API int lfd_grid_n(const lfd_grid* g);
LFD_API double lfd_grid_extent(const lfd_grid* g);
LFD_API double lfd_grid_spacing(const lfd_grid* g);
LFD_API size_t lfd_grid_size(const lfd_grid* g);
LFD_API lfd_status lfd_grid_node(const lfd_grid* g, size_t index, double v[3]);

/* ---- states ---- */
typedef struct lfd_state_info {
    double epsilon;
    double mass;
    double momentum[3];
    double energy;
    double kappa0;
    double sup;
} lfd_state_info;

/* Copies `len` values (must equal the grid size). */
LFD_API lfd_status lfd_state_create(const lfd_grid* g, const double* values, size_t len, double epsilon,
                                    lfd_state** out);
LFD_API void lfd_state_destroy(lfd_state* s);
LFD_API lfd_status lfd_state_info_get(const lfd_state* s, lfd_state_info* out);
LFD_API lfd_status lfd_state_values(const lfd_state* s, double* out, size_t len);
/* Writes a descriptor into buf (truncated, always NUL-terminated). */
LFD_API lfd_status lfd_state_descriptor(const lfd_state* s, char* buf, size_t len);

typedef struct lfd_normalize_info {
    double rho;
    double u[3];
    double temperature;
    double rotation[3][3]; /* rotation[c][k]: component k of principal axis c */
    double tail_mass;
    double residual;
} lfd_normalize_info;

/* Mass 1, momentum 0, energy 3, principal axes; info may be NULL. */
LFD_API lfd_status lfd_state_normalize(const lfd_state* s, lfd_state** out, lfd_normalize_info* info);

/* ---- equilibria ---- */
typedef struct lfd_equilibrium {
    double a, b, epsilon;
    double residual_mass, residual_energy;
    double grid_mass, grid_energy;
    double sup_norm;
    int iterations;
    int used_fallback;
} lfd_equilibrium;

LFD_API double lfd_epsilon_bar(void);
LFD_API double lfd_epsilon_saturation_limit(void);
LFD_API lfd_status lfd_fd_parameters(double epsilon, lfd_equilibrium* out);
/* grid_consistent = 0: continuum (a, b) sampled; 1: (a, b) re-solved so the grid moments are exact. */
LFD_API lfd_status lfd_fd_state(const lfd_grid* g, double epsilon, int grid_consistent, lfd_state** out,
                                lfd_equilibrium* params);
LFD_API lfd_status lfd_maxwellian(const lfd_grid* g, lfd_state** out);
LFD_API lfd_status lfd_saturated_state(const lfd_grid* g, double epsilon, lfd_state** out);
LFD_API lfd_status lfd_saturation_threshold(double rel_width, double* lower, double* upper);

/* ---- functionals ---- */
LFD_API lfd_status lfd_weighted_moment(const lfd_state* s, double exponent, double* out);
LFD_API lfd_status lfd_boltzmann_entropy(const lfd_state* s, double* out);
LFD_API lfd_status lfd_fd_entropy(const lfd_state* s, double* out);
LFD_API lfd_status lfd_relative_entropy(const lfd_state* f, const lfd_state* g, double* out);
LFD_API lfd_status lfd_weighted_sqrt_fisher(const lfd_state* s, double gamma, double* out);
LFD_API lfd_status lfd_fisher_relative_K(const lfd_state* s, double gamma, double K, double* out);
LFD_API lfd_status lfd_fisher_relative_FD(const lfd_state* s, double gamma, double b_eps, double* out);
LFD_API lfd_status lfd_l1_distance(const lfd_state* f, const lfd_state* g, double* out);

typedef enum lfd_production_form { LFD_PRODUCTION_PROJECTION = 0, LFD_PRODUCTION_CROSS = 1 } lfd_production_form;
LFD_API lfd_status lfd_entropy_production(const lfd_state* s, double gamma, lfd_production_form form, double* out);

/* ---- constants ---- */
typedef struct lfd_constants {
    double gamma, epsilon;
    double K;
    double L[3];
    double a[3];
    double A_ell[3];
    double B_ij[3]; /* pairs (0,1), (0,2), (1,2) */
    double e_gamma, A_gamma, B_gamma;
    double I0, I2, script_I;
    double m_2g;
    double lambda;
    double kappa0;
} lfd_constants;

LFD_API lfd_status lfd_constants_bundle(const lfd_state* s, double gamma, lfd_constants* out);
LFD_API lfd_status lfd_circle_infimum(double mx, double mxy, double my, double* out);

/* ---- verification harness ---- */
typedef struct lfd_check_report {
    char name[48];
    char state_descriptor[64];
    char orientation[12];
    char reason[160];
    double gamma, epsilon;
    int n;
    double lhs, rhs, margin;
    int passed;
    int skipped;
} lfd_check_report;

LFD_API size_t lfd_check_count(void);
LFD_API const char* lfd_check_name(size_t i);
LFD_API lfd_status lfd_run_check(const char* name, const lfd_state* s, double gamma, double s_exponent,
                                 lfd_check_report* out);

LFD_API size_t lfd_family_count(void);
LFD_API const char* lfd_family_member(size_t i);
LFD_API lfd_status lfd_family_state(const char* member, const lfd_grid* g, double epsilon, unsigned seed,
                                    lfd_state** out);

/* checks / members may be NULL (all); counts refer to the arrays. */
typedef struct lfd_suite_spec {
    int n;
    double extent;
    unsigned seed;
    const char* const* members;
    size_t member_count;
    const char* const* checks;
    size_t check_count;
    const double* gammas;
    size_t gamma_count;
    const double* epsilons;
    size_t epsilon_count;
    double s_exponent;
} lfd_suite_spec;

LFD_API lfd_status lfd_run_suite(const lfd_suite_spec* spec, lfd_reports** out);
LFD_API void lfd_reports_destroy(lfd_reports* r);
LFD_API size_t lfd_reports_size(const lfd_reports* r);
LFD_API size_t lfd_reports_failed(const lfd_reports* r);
LFD_API lfd_status lfd_reports_get(const lfd_reports* r, size_t i, lfd_check_report* out);
LFD_API lfd_status lfd_reports_write_csv(const lfd_reports* r, const char* path);
LFD_API lfd_status lfd_reports_write_summary(const lfd_reports* r, const char* path);

/* ---- solver ---- */
typedef enum lfd_flux_form { LFD_FLUX_GRADIENT = 0, LFD_FLUX_ENTROPIC = 1 } lfd_flux_form;

typedef struct lfd_solver_config {
    double gamma;
    double dt;       /* <= 0 selects dt_scale * dt_auto */
    double dt_scale;
    double t_end;
    int conservation_projection;
    int record_every;
    int clip;
    lfd_flux_form flux;
} lfd_solver_config;

LFD_API void lfd_solver_config_default(lfd_solver_config* cfg);
/* out has grid-size entries. */
LFD_API lfd_status lfd_collision_operator(const lfd_state* s, double gamma, lfd_flux_form flux, double* out,
                                          size_t len);
LFD_API lfd_status lfd_dt_auto(const lfd_state* s, double gamma, double* out);
LFD_API lfd_status lfd_step(const lfd_state* s, const lfd_solver_config* cfg, lfd_state** out);
LFD_API lfd_status lfd_evolve(const lfd_state* f0, const lfd_solver_config* cfg, lfd_trajectory** out);
LFD_API void lfd_trajectory_destroy(lfd_trajectory* t);

typedef struct lfd_trajectory_row {
    double t, S_eps, D_eps, H_rel, mass, px, py, pz, energy, kappa0, f_inf;
    int negative_nodes;
} lfd_trajectory_row;

typedef struct lfd_trajectory_info {
    size_t records;
    long steps;
    double dt;
    double worst_entropy_drop;
    int clipped_total;
    int dt_halvings; /* automatic step restarted at half size after a node went negative */
} lfd_trajectory_info;

LFD_API lfd_status lfd_trajectory_info_get(const lfd_trajectory* t, lfd_trajectory_info* out);
LFD_API lfd_status lfd_trajectory_row_get(const lfd_trajectory* t, size_t i, lfd_trajectory_row* out);
LFD_API lfd_status lfd_trajectory_write_csv(const lfd_trajectory* t, const char* path);
LFD_API lfd_status lfd_trajectory_final_state(const lfd_trajectory* t, lfd_state** out);

typedef struct lfd_decay_fit {
    double mu;
    double r2;
    int points;
    int stationary;
    int floor_truncated;
} lfd_decay_fit;

LFD_API lfd_status lfd_fit_decay_rate(const lfd_trajectory* t, double t0, lfd_decay_fit* out);

#ifdef __cplusplus
}
#endif

#endif
