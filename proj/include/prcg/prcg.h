/*
 * prcg: parareal with a Chebyshev-Gauss collocation fine propagator.
 *
 * C interface. Objects are opaque handles created by prcg_*_create-style
 * functions and released by the matching *_destroy. Every fallible call
 * returns a prcg_status; on failure prcg_last_error() describes the problem
 * (thread-local, valid until the next failing call on the same thread).
 */
#ifndef PRCG_PRCG_H
#define PRCG_PRCG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(PRCG_BUILDING_LIBRARY)
#    define PRCG_API __declspec(dllexport)
#  else
#    define PRCG_API __declspec(dllimport)
#  endif
#else
#  define PRCG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum prcg_status {
  PRCG_OK = 0,
  PRCG_ERR_INVALID_ARGUMENT = 1, /* null pointer, bad size, bad enum */
  PRCG_ERR_DOMAIN = 2,           /* value outside the function's domain */
  PRCG_ERR_NONCONVERGENCE = 3,   /* iteration did not meet its tolerance */
  PRCG_ERR_SINGULAR = 4,         /* singular linear system (pole) */
  PRCG_ERR_SOLVER = 5,           /* rhs or sub-solve failure at an index */
  PRCG_ERR_INTERNAL = 99
} prcg_status;

typedef enum prcg_kind {
  PRCG_BACKWARD_EULER = 0,
  PRCG_FORWARD_EULER = 1,
  PRCG_TRAPEZOIDAL = 2,
  PRCG_TR_BDF2 = 3,
  PRCG_GAUSS4 = 4,
  PRCG_ERK4 = 5,
  PRCG_CHEBYSHEV_GAUSS = 6
} prcg_kind;

typedef struct prcg_propagator_spec {
  prcg_kind kind;
  int substeps;  /* J >= 1; ignored by PRCG_CHEBYSHEV_GAUSS */
  int cg_points; /* M >= 0; PRCG_CHEBYSHEV_GAUSS only */
} prcg_propagator_spec;

PRCG_API const char* prcg_last_error(void);
PRCG_API const char* prcg_status_string(prcg_status status);
PRCG_API const char* prcg_version(void);

/* ---- stability and contraction analysis (backward Euler coarse) ---- */

PRCG_API prcg_status prcg_stability(const prcg_propagator_spec* spec, double z, double* out);
/* K(z); +inf when the fine propagator amplifies. */
PRCG_API prcg_status prcg_contraction(const prcg_propagator_spec* spec, double z, double* out);
/* max of K over [0, z_max] and its location. */
PRCG_API prcg_status prcg_rho(const prcg_propagator_spec* spec, double z_max, double* rho,
                              double* z_at_rho);

typedef enum prcg_mmin_branch {
  PRCG_MMIN_ZERO = 0,
  PRCG_MMIN_ONE = 1,
  PRCG_MMIN_SEARCH = 2
} prcg_mmin_branch;

typedef struct prcg_mmin_result {
  double z_max;
  int m_min;
  prcg_mmin_branch branch;
  double condition_value;
  double threshold;
} prcg_mmin_result;

PRCG_API prcg_status prcg_mmin(double z_max, prcg_mmin_result* out);
PRCG_API prcg_status prcg_threshold_roots(double* z0_star, double* z1_star);

/* ---- problems ---- */

typedef struct prcg_problem prcg_problem;

/* u' + diag(eigenvalues) u = 0, u(0) = 1. */
PRCG_API prcg_status prcg_problem_create_spd_diag(const double* eigenvalues, size_t count,
                                                  double T, prcg_problem** out);
/* Log-spaced spectrum of `count` values in [lambda_min, lambda_max]. */
PRCG_API prcg_status prcg_problem_create_spd_logspaced(size_t count, double lambda_min,
                                                       double lambda_max, double T,
                                                       prcg_problem** out);
/* Second-difference matrix on `points` interior nodes of the unit interval. */
PRCG_API prcg_status prcg_problem_create_laplacian_1d(size_t points, double T,
                                                      prcg_problem** out);
/* Two-body LEO problem; state [r (km); v (km/s)]. */
PRCG_API prcg_status prcg_problem_create_kepler(double T, prcg_problem** out);
/* Periodic Burgers on [0, 2) with nx points; reference is the closed form. */
PRCG_API prcg_status prcg_problem_create_burgers(double nu, size_t nx, double T,
                                                 prcg_problem** out);
PRCG_API void prcg_problem_destroy(prcg_problem* problem);

PRCG_API size_t prcg_problem_dim(const prcg_problem* problem);
PRCG_API double prcg_problem_final_time(const prcg_problem* problem);
PRCG_API int prcg_problem_has_reference(const prcg_problem* problem);
PRCG_API prcg_status prcg_problem_initial_state(const prcg_problem* problem, double* out,
                                                size_t len);
PRCG_API prcg_status prcg_problem_reference(const prcg_problem* problem, double t, double* out,
                                            size_t len);
/* Advances u (length dim) from t by dt with the given propagator. */
PRCG_API prcg_status prcg_advance(const prcg_problem* problem, const prcg_propagator_spec* spec,
                                  double t, const double* u, double dt, double* out, size_t len);

/* ---- parareal ---- */

typedef enum prcg_init { PRCG_INIT_COARSE = 0, PRCG_INIT_RANDOM = 1 } prcg_init;

typedef struct prcg_parareal_config {
  size_t N; /* coarse subintervals over [0, T] of the problem */
  prcg_propagator_spec coarse;
  prcg_propagator_spec fine;
  double tol;
  int max_k;
  prcg_init init;
  uint64_t seed;
  int workers;
} prcg_parareal_config;

/* Backward Euler coarse, Chebyshev-Gauss M = 8 fine, tol 1e-10, max_k 50. */
PRCG_API void prcg_parareal_config_default(prcg_parareal_config* cfg);

typedef struct prcg_record {
  int k;
  double iter_error;
  int has_abs_error;
  double abs_error;
  int has_abs_error_position;
  double abs_error_position;
} prcg_record;

typedef struct prcg_run prcg_run;

/* Runs to tolerance. When max_k is reached first the status is
 * PRCG_ERR_NONCONVERGENCE and *out still holds the history. */
PRCG_API prcg_status prcg_parareal_run(const prcg_problem* problem,
                                       const prcg_parareal_config* cfg, prcg_run** out);
PRCG_API void prcg_run_destroy(prcg_run* run);
PRCG_API int prcg_run_converged(const prcg_run* run);
PRCG_API size_t prcg_run_iterations(const prcg_run* run);
PRCG_API prcg_status prcg_run_record(const prcg_run* run, size_t index, prcg_record* out);
/* State u_n at coarse point n = 0..N of the final iterate. */
PRCG_API prcg_status prcg_run_state(const prcg_run* run, size_t n, double* out, size_t len);
PRCG_API size_t prcg_run_points(const prcg_run* run);

#ifdef __cplusplus
}
#endif

#endif /* PRCG_PRCG_H */
