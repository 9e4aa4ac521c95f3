/*
 * phonon_stats: steady-state phonon statistics of a laser-driven two-level
 * quantum dot coupled to a single acoustic cavity mode.
 *
 * Plain C interface. Objects are opaque handles created by *_create /
 * ps_solve* and released by the matching *_destroy. Every fallible call
 * returns a ps_status; on failure ps_last_error() holds a message for the
 * calling thread. All rates are in units of the spontaneous emission rate.
 */
#ifndef PHONON_STATS_H
#define PHONON_STATS_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(PHONON_STATS_BUILDING)
#    define PS_API __declspec(dllexport)
#  else
#    define PS_API __declspec(dllimport)
#  endif
#else
#  define PS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ps_status {
  PS_OK = 0,
  PS_ERR_INVALID_ARGUMENT = 1,
  PS_ERR_SINGULAR_SYSTEM = 2,
  PS_ERR_ZERO_MEAN_PHONON = 3,
  PS_ERR_TRUNCATION_DIVERGED = 4,
  PS_ERR_DIMENSION_OVERFLOW = 5,
  PS_ERR_DEGENERATE_KERNEL = 6,
  PS_ERR_INTEGRATOR_FAILURE = 7,
  PS_ERR_INTERNAL = 99
} ps_status;

typedef enum ps_mode {
  PS_MODE_SECULAR = 0,
  PS_MODE_BEYOND_SECULAR = 1
} ps_mode;

typedef struct ps_params ps_params;
typedef struct ps_solution ps_solution;

/* Raw inputs in any common frequency unit; gamma sets the scale. */
typedef struct ps_param_values {
  double rabi;     /* Omega, half Rabi frequency */
  double detuning; /* Delta = omega_qd - omega_L */
  double omega_ph;
  double g;
  double gamma;
  double gamma_c;
  double kappa;
  double nbar;
} ps_param_values;

typedef struct ps_dressed_frame {
  double theta;
  double sin_2theta;
  double cos_2theta;
  double omega_bar;
  double delta_bar;
  double beta;
  double delta_eff;
  double gamma_plus;
  double gamma_minus;
  double gamma_zero;
  int secular_regime_ok; /* 0 when 2*omega_bar < 10 gamma */
} ps_dressed_frame;

typedef struct ps_solver_options {
  double tol;    /* relative convergence tolerance, default 1e-8 */
  int n_start;   /* first Fock cutoff, default 8 */
  int n_cap;     /* largest Fock cutoff tried, default 4096 */
  int iterative; /* nonzero: BiCGSTAB instead of sparse LU */
} ps_solver_options;

typedef struct ps_observables {
  double n_mean;
  double g2;
  int n_max_used;
  double residual;
} ps_observables;

typedef struct ps_oracle_options {
  int n_max;             /* Fock cutoff shared by both routes, default 10 */
  double tolerance;      /* componentwise pass threshold, default 1e-8 */
  int max_dimension;     /* cap on 2*(n_max+1), default 64 */
  int corrupt_generator; /* test hook: flips one hierarchy sign */
} ps_oracle_options;

typedef struct ps_oracle_report {
  int n_max;
  double max_deviation;        /* max_{i,n} |P_hier - P_oracle| */
  double projected_residual;   /* ||G P_oracle||_inf */
  double hierarchy_residual;   /* ||G P_hier||_inf */
  double oracle_residual;      /* ||L vec(rho)||_inf */
  double kernel_gap;           /* second-smallest / largest singular value of L */
  double n_mean_hierarchy;
  double n_mean_oracle;
  double g2_hierarchy;         /* NaN when <n> vanishes */
  double g2_oracle;
  double n_mean_rel_delta;
  double g2_rel_delta;
  int passed;
} ps_oracle_report;

PS_API const char* ps_version(void);
PS_API const char* ps_status_name(ps_status status);
PS_API const char* ps_last_error(void);
PS_API const char* ps_mode_name(ps_mode mode);

PS_API ps_status ps_params_create(const ps_param_values* values, ps_params** out);
/* Dimensionless figure ratios: 2*Omega/gamma, Delta/(2*Omega), kappa/gamma,
 * nbar, g/gamma, omega_ph/gamma, gamma_c/gamma. */
PS_API ps_status ps_params_from_ratios(double two_omega, double detuning_ratio,
                                       double kappa, double nbar, double g,
                                       double omega_ph, double gamma_c,
                                       ps_params** out);
PS_API void ps_params_destroy(ps_params* params);
/* Normalized values (gamma == 1). */
PS_API ps_status ps_params_values(const ps_params* params, ps_param_values* out);

PS_API ps_status ps_dress(const ps_params* params, ps_mode mode, ps_dressed_frame* out);
PS_API ps_status ps_thermal_occupation(double omega_ph, double temperature,
                                       double unit_scale, double* out);
PS_API ps_status ps_kappa_from_quality(double omega_ph, double quality, double* out);

PS_API void ps_solver_options_default(ps_solver_options* options);
/* Adaptive truncation. options may be NULL for defaults. */
PS_API ps_status ps_solve(const ps_params* params, ps_mode mode,
                          const ps_solver_options* options, ps_solution** out);
/* One solve at a fixed Fock cutoff. */
PS_API ps_status ps_solve_fixed(const ps_params* params, ps_mode mode, int n_max,
                                ps_solution** out);
PS_API void ps_solution_destroy(ps_solution* solution);
PS_API int ps_solution_n_max(const ps_solution* solution);
PS_API ps_status ps_solution_observables(const ps_solution* solution, ps_observables* out);
/* P_n^(family), family in 1..6, n in 0..n_max. */
PS_API ps_status ps_solution_component(const ps_solution* solution, int family, int n,
                                       double* re, double* im);
/* Largest violation of the steady-state reality pattern. */
PS_API ps_status ps_solution_reality_violation(const ps_solution* solution, double* out);

PS_API void ps_oracle_options_default(ps_oracle_options* options);
/* Cross-check of the hierarchy against the full Lindblad steady state.
 * Returns PS_OK whenever both routes ran; see report->passed. */
PS_API ps_status ps_oracle_check(const ps_params* params, ps_mode mode,
                                 const ps_oracle_options* options,
                                 ps_oracle_report* report);

#ifdef __cplusplus
}
#endif

#endif /* PHONON_STATS_H */
