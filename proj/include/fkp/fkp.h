/* C interface to the fKP solver and verification library.
 *
 * Every function returns an fkp_status. On failure the message is available
 * from fkp_last_error() on the calling thread until the next failing call.
 * Handles are opaque and owned by the caller; destroy functions accept NULL.
 */
#ifndef FKP_H
#define FKP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(FKP_BUILDING_LIBRARY)
#define FKP_API __declspec(dllexport)
#else
#define FKP_API __declspec(dllimport)
#endif
#else
#define FKP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fkp_status {
  FKP_OK = 0,
  FKP_ERR_INVALID_ARGUMENT = 1,
  FKP_ERR_DOMAIN = 2,
  FKP_ERR_CONSTRAINT = 3,
  FKP_ERR_IO = 4,
  FKP_ERR_BLOWUP = 5,
  FKP_ERR_INTERNAL = 99
} fkp_status;

FKP_API const char* fkp_last_error(void);
FKP_API const char* fkp_status_name(fkp_status s);
FKP_API const char* fkp_version(void);
FKP_API int fkp_manifest_schema_version(void);
FKP_API const char* fkp_git_describe(void);

/* ---- fields ---------------------------------------------------------- */

typedef struct fkp_field fkp_field;

/* values: nx*ny samples, x slowest, on the nodes (i lx/nx, j ly/ny). */
FKP_API fkp_status fkp_field_create_real(int nx, int ny, double lx, double ly, const double* values,
                                         fkp_field** out);
FKP_API fkp_status fkp_field_soliton(int nx, int ny, double lx, double ly, double c, double x0,
                                     double t, fkp_field** out);
FKP_API fkp_status fkp_field_gaussian(int nx, int ny, double lx, double ly, double amplitude,
                                      double width, fkp_field** out);
FKP_API fkp_status fkp_field_random_band_limited(uint64_t seed, int max_mode, int n, fkp_field** out);
FKP_API fkp_status fkp_field_load(const char* path, fkp_field** out);
FKP_API fkp_status fkp_field_save(const fkp_field* u, const char* path);
FKP_API fkp_status fkp_field_clone(const fkp_field* u, fkp_field** out);
FKP_API void fkp_field_destroy(fkp_field* u);

FKP_API fkp_status fkp_field_shape(const fkp_field* u, int* nx, int* ny, double* lx, double* ly);
/* Real-space samples; n must equal nx*ny. */
FKP_API fkp_status fkp_field_values(const fkp_field* u, double* out, size_t n);

FKP_API fkp_status fkp_field_l2(const fkp_field* u, double* out);
FKP_API fkp_status fkp_field_linf(const fkp_field* u, double* out);
FKP_API fkp_status fkp_field_mass(const fkp_field* u, double* out);
FKP_API fkp_status fkp_field_norm_xs(const fkp_field* u, double s, double* out);
FKP_API fkp_status fkp_field_norm_hs1s2(const fkp_field* u, double s1, double s2, double* out);
FKP_API fkp_status fkp_field_deriv_x(const fkp_field* u, fkp_field** out);
/* ||a - b||_2 / ||b||_2 on matching grids. */
FKP_API fkp_status fkp_field_rel_diff(const fkp_field* a, const fkp_field* b, double* out);

/* ---- symbols --------------------------------------------------------- */

typedef struct fkp_symbol fkp_symbol;

/* family: "power" (param = alpha), "ilw" (param = delta), "whitham" (param = b).
 * kappa: +1 fKP-II, -1 fKP-I. */
FKP_API fkp_status fkp_symbol_create(const char* family, double param, int kappa, fkp_symbol** out);
/* CSV "xi,w" with strictly increasing positive xi. */
FKP_API fkp_status fkp_symbol_from_table(const char* csv_path, double alpha, int kappa,
                                         fkp_symbol** out);
FKP_API void fkp_symbol_destroy(fkp_symbol* s);

FKP_API fkp_status fkp_symbol_alpha(const fkp_symbol* s, double* out);
FKP_API fkp_status fkp_symbol_w(const fkp_symbol* s, double xi, int order, double* out);
FKP_API fkp_status fkp_symbol_omega(const fkp_symbol* s, double xi, double eta, double* out);

typedef struct fkp_hypothesis_report {
  double xi0;
  double alpha;
  double band_lo, band_hi;
  double max_abs_w_low;
  double ratio_min[3];
  double ratio_max[3];
  int pass;
} fkp_hypothesis_report;

FKP_API fkp_status fkp_validate_symbol(const fkp_symbol* s, double alpha, double xi0, double band_lo,
                                       double band_hi, fkp_hypothesis_report* out);

/* ---- evolution ------------------------------------------------------- */

typedef struct fkp_solver_config {
  double dt;
  double t_end;
  int snapshot_every;
  int dealias;
  int diagnostics_every;
  double xs_order;
  int linear_only;
} fkp_solver_config;

FKP_API void fkp_solver_config_default(fkp_solver_config* cfg);

typedef struct fkp_run fkp_run;
typedef void (*fkp_snapshot_fn)(long step, double t, const fkp_field* u, void* user);

/* Blow-up is not an error: the run handle reports it. */
FKP_API fkp_status fkp_run_create(const fkp_field* u0, const fkp_symbol* s, const fkp_solver_config* cfg,
                                  fkp_snapshot_fn sink, void* user, fkp_run** out);
FKP_API void fkp_run_destroy(fkp_run* r);

typedef struct fkp_run_summary {
  int blew_up;
  double t_reached;
  double dt_used;
  long steps;
  double advisory_dt;
  double discarded_energy;
} fkp_run_summary;

FKP_API fkp_status fkp_run_summary_get(const fkp_run* r, fkp_run_summary* out);
FKP_API const char* fkp_run_message(const fkp_run* r);
FKP_API size_t fkp_run_diagnostics_count(const fkp_run* r);
/* row: t, mass, l2, hamiltonian (NaN if undefined), xs, w1inf */
FKP_API fkp_status fkp_run_diagnostics_row(const fkp_run* r, size_t index, double row[6]);
FKP_API fkp_status fkp_run_write_diagnostics(const fkp_run* r, const char* path);
FKP_API fkp_status fkp_run_final_state(const fkp_run* r, fkp_field** out);

FKP_API fkp_status fkp_linear_propagate(const fkp_field* u0, const fkp_symbol* s, double t, fkp_field** out);
FKP_API fkp_status fkp_step(const fkp_field* u, const fkp_symbol* s, const fkp_solver_config* cfg,
                            fkp_field** out);
/* *defined = 0 for non pure-power symbols. */
FKP_API fkp_status fkp_hamiltonian(const fkp_field* u, const fkp_symbol* s, double* out, int* defined);
FKP_API fkp_status fkp_scaling_transform(const fkp_field* u, double lambda, double alpha, fkp_field** out);

typedef struct fkp_scaling_report {
  double lambda;
  double t;
  double t_scaled;
  double discrepancy;
  int blew_up;
} fkp_scaling_report;

FKP_API fkp_status fkp_verify_scaling(const fkp_field* u0, const fkp_symbol* s, const fkp_solver_config* cfg,
                                      double lambda, fkp_scaling_report* out);

/* ---- zero-mass constraint -------------------------------------------- */

typedef struct fkp_dt_criterion {
  double value;
  double zero_column_energy;
  int flag;
} fkp_dt_criterion;

FKP_API fkp_status fkp_dt_criterion_eval(const fkp_field* u0, fkp_dt_criterion* out);

typedef enum fkp_taper { FKP_TAPER_COSINE = 0, FKP_TAPER_GAUSSIAN = 1 } fkp_taper;

typedef struct fkp_quadrature_spec {
  double xi_min_exclusion;
  double xi_max; /* 0 selects 12 sigma */
  int n_xi;
  fkp_taper taper;
  double taper_fraction;
  int order;
  double refine_tol;
} fkp_quadrature_spec;

FKP_API void fkp_quadrature_spec_default(fkp_quadrature_spec* q);

typedef enum fkp_datum_kind { FKP_DATUM_GAUSSIAN = 0, FKP_DATUM_GAUSSIAN_DX = 1 } fkp_datum_kind;

typedef struct fkp_datum {
  fkp_datum_kind kind;
  double amplitude;
  double sigma;
} fkp_datum;

FKP_API fkp_status fkp_datum_value(const fkp_datum* d, double x, double y, double* out);
FKP_API fkp_status fkp_datum_x_mass(const fkp_datum* d, double y, double* out);

/* Outputs have n entries each; change may be NULL. *flagged set if the
 * refinement change exceeds the tolerance. */
FKP_API fkp_status fkp_free_solution_at(const fkp_datum* d, const fkp_symbol* s, const double* x,
                                        const double* y, size_t n, double t, const fkp_quadrature_spec* q,
                                        double* re, double* im, double* change, int* flagged);

typedef struct fkp_mass_row {
  double X;
  double mass_re, mass_im;
  double fourier_re, fourier_im;
  double refinement_change;
  int flagged;
} fkp_mass_row;

FKP_API fkp_status fkp_generalized_x_mass(const fkp_datum* d, const fkp_symbol* s, double y, double t,
                                          const double* X, size_t n, const fkp_quadrature_spec* q,
                                          fkp_mass_row* rows, int* flagged);

/* ---- resonance ------------------------------------------------------- */

typedef enum fkp_variant { FKP_FKP2 = 0, FKP_FKP1 = 1 } fkp_variant;

FKP_API fkp_status fkp_gamma1(double alpha, double xi1, double xi2, double* out);
FKP_API fkp_status fkp_gamma2(double xi1, double xi2, double eta1, double eta2, double* out);
FKP_API fkp_status fkp_omega_res(fkp_variant v, double alpha, double xi1, double xi2, double eta1,
                                 double eta2, double* out);

typedef struct fkp_rect {
  double xi_base, eta_base;
  double xi_lo, xi_hi;
  double eta_lo, eta_hi;
  double amplitude;
} fkp_rect;

typedef struct fkp_resonance_data {
  fkp_variant variant;
  double alpha, N, theta, gamma, epsilon, s1, s2;
  fkp_rect rect1, rect2;
  double norm1, norm2;
} fkp_resonance_data;

FKP_API fkp_status fkp_build_test_data(fkp_variant v, double alpha, double N, double theta, double s1,
                                       double s2, fkp_resonance_data* out);

typedef struct fkp_bounds_report {
  long n_samples;
  uint64_t seed;
  double gamma1_ratio_min, gamma1_ratio_max;
  double gamma2_ratio_min, gamma2_ratio_max;
  double gamma1_remainder_max, gamma2_remainder_max;
  double omega_max;
} fkp_bounds_report;

FKP_API fkp_status fkp_resonance_bounds_check(const fkp_resonance_data* d, long n_samples, uint64_t seed,
                                              fkp_bounds_report* out);

typedef struct fkp_picard_options {
  int order;
  double rel_tol;
  int max_level;
  int use_window;
  fkp_rect window; /* offsets relative to rect2's base */
} fkp_picard_options;

FKP_API void fkp_picard_options_default(fkp_picard_options* o);

typedef struct fkp_picard_result {
  double N, t, norm, ratio, omega_max, refinement_change;
  int level;
  int flagged;
} fkp_picard_result;

FKP_API fkp_status fkp_picard_second_norm(const fkp_resonance_data* d, double t, const fkp_picard_options* o,
                                          fkp_picard_result* out);

typedef struct fkp_exponent_fit {
  double exponent, intercept, r2;
} fkp_exponent_fit;

FKP_API fkp_status fkp_growth_exponent_fit(const fkp_picard_result* results, size_t n, fkp_exponent_fit* out);
FKP_API double fkp_predicted_exponent(fkp_variant v, double alpha);

/* ---- inequalities ---------------------------------------------------- */

typedef struct fkp_critical {
  double s_alpha, l2_critical, energy_critical, l2_scaling_exponent;
} fkp_critical;

FKP_API fkp_status fkp_critical_exponents(double alpha, fkp_critical* out);

typedef struct fkp_gn {
  double ratio, lhs, rhs, discarded;
  int in_lemma_range;
} fkp_gn;

FKP_API fkp_status fkp_gn_ratio(const fkp_field* f, double alpha, fkp_gn* out);

typedef struct fkp_gn_row {
  double a, b, ratio;
} fkp_gn_row;

/* rows needs (max_pow - min_pow + 1)^2 entries. */
FKP_API fkp_status fkp_gn_dilation_scan(const fkp_field* f, double alpha, int min_pow, int max_pow,
                                        fkp_gn_row* rows, double* max_ratio);

typedef struct fkp_decay_value {
  double lambda, re, im, R;
  long panels;
  int flagged;
} fkp_decay_value;

FKP_API fkp_status fkp_decay_J(double lambda, double alpha, double R, int conjugate, fkp_decay_value* out);

typedef struct fkp_decay_summary {
  double sup_abs, sup_lambda, max_rel_change;
  int stable, edge_growth, flagged;
} fkp_decay_summary;

/* at_R and at_2R need n entries each. */
FKP_API fkp_status fkp_decay_scan(double alpha, const double* lambdas, size_t n, double R,
                                  fkp_decay_value* at_R, fkp_decay_value* at_2R, fkp_decay_summary* out);

FKP_API fkp_status fkp_embedding_ratio(const fkp_field* u, double s, double* out);
/* ratios needs draws entries (may be NULL). */
FKP_API fkp_status fkp_embedding_ensemble(double s, int draws, uint64_t seed, int max_mode, double* ratios,
                                          double* max_ratio);

#ifdef __cplusplus
}
#endif

#endif
