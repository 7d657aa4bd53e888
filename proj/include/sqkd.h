/* C interface to the dc-SQUID CV-QKD simulator core.
 *
 * Every function returns sqkd_status; outputs go through pointers. On any
 * failure the per-thread message from sqkd_last_error() describes the cause.
 * Objects returned through ** handles are owned by the caller and released
 * with the matching _free function.
 */
#ifndef SQKD_H
#define SQKD_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sqkd_status {
  SQKD_OK = 0,
  SQKD_ERR_INVALID_ARGUMENT = 1,
  SQKD_ERR_TRUNCATION = 2,
  SQKD_ERR_DIMENSION_MISMATCH = 3,
  SQKD_ERR_GRID = 4,
  SQKD_ERR_NOT_COPRIME = 5,
  SQKD_ERR_NON_REAL = 6,
  SQKD_ERR_REGIME = 7,
  SQKD_ERR_TOO_FEW_SAMPLES = 8,
  SQKD_ERR_EVE_BELOW_VACUUM = 9,
  SQKD_ERR_RECONCILIATION = 10,
  SQKD_ERR_CONFIG = 11,
  SQKD_ERR_VALIDATION = 12,
  SQKD_ERR_IO = 13,
  SQKD_ERR_UNKNOWN = 14
} sqkd_status;

/* Quadrature selectors for the functions below. */
#define SQKD_QUAD_PHI 0
#define SQKD_QUAD_V 1

const char* sqkd_version(void);

/* Message describing the most recent failure on this thread; never NULL. */
const char* sqkd_last_error(void);

void sqkd_string_free(char* s);

/* ---- truncated-basis states -------------------------------------------- */

typedef struct sqkd_state sqkd_state;

/* Coherent state with quadrature means (phi, v); dim = 0 picks a safe
 * truncation automatically. */
sqkd_status sqkd_state_coherent(double phi, double v, int dim, sqkd_state** out);
void sqkd_state_free(sqkd_state* s);

sqkd_status sqkd_state_dim(const sqkd_state* s, int* dim);
sqkd_status sqkd_state_displace(sqkd_state* s, double lambda);
sqkd_status sqkd_state_rotate(sqkd_state* s, double theta);
sqkd_status sqkd_state_evolve(sqkd_state* s, double omega_eff, double nu, double t);
sqkd_status sqkd_state_moments(const sqkd_state* s, int quadrature, double* mean,
                               double* variance);
sqkd_status sqkd_state_pdf(const sqkd_state* s, int quadrature, const double* xs, size_t n,
                           double* out_pdf);
sqkd_status sqkd_state_sample(const sqkd_state* s, int quadrature, uint64_t seed, size_t n,
                              double* out);
/* |<a|b>| of two states of equal dimension. */
sqkd_status sqkd_state_fidelity(const sqkd_state* a, const sqkd_state* b, double* out);

/* ---- closed-form results ------------------------------------------------ */

sqkd_status sqkd_variance_closed(double phi, double v, double omega_eff, double nu, double t,
                                 int quadrature, double* out);
/* even_ratio != 0 selects the even-frequency-ratio branch. */
sqkd_status sqkd_cat_variance(double phi, double v, int even_ratio, int quadrature,
                              double* out);
sqkd_status sqkd_noise_cab(double phi, double v, double omega_eff, double nu, double t,
                           int quadrature, double* out);
sqkd_status sqkd_ensemble_noise(double omega_eff, double nu, double t, double* out);
sqkd_status sqkd_time_avg_noise(double omega_eff, double nu, double* out);

/* Superposition components at t = pi p/(nu q). Arrays hold up to cap
 * entries; *count receives the true component count. */
sqkd_status sqkd_cat_components(int p, int q, double omega_over_nu, double phi, double v,
                                size_t cap, double* coeff_re, double* coeff_im,
                                double* alpha_re, double* alpha_im, size_t* count);

/* ---- junction device ----------------------------------------------------- */

/* out_params = { omega, omega_eff, nu, mu }. */
sqkd_status sqkd_effective_params(double capacitance, double inductance, double josephson,
                                  double charge, double drive_flux, double out_params[4]);

/* ---- information rates --------------------------------------------------- */

sqkd_status sqkd_mutual_info(double signal, double noise, double* out);
sqkd_status sqkd_rate_background(double v_total, double chi, double* out);
sqkd_status sqkd_rate_timed(double v_mod, double chi, double c_ab, double c_ae, double* out);

/* ---- experiments ---------------------------------------------------------- */

typedef struct sqkd_experiment sqkd_experiment;

sqkd_status sqkd_experiment_load(const char* config_path, sqkd_experiment** out);
sqkd_status sqkd_experiment_load_text(const char* config_text, sqkd_experiment** out);
void sqkd_experiment_free(sqkd_experiment* e);

sqkd_status sqkd_experiment_set_seed(sqkd_experiment* e, uint64_t seed);
sqkd_status sqkd_experiment_set_full_numeric(sqkd_experiment* e, int on);
sqkd_status sqkd_experiment_has_seed(const sqkd_experiment* e, int* has);

/* Runs the full pipeline: simulate, sift, estimate, and when the estimate
 * is secure, reconcile and hash down to the final key. */
sqkd_status sqkd_experiment_run(sqkd_experiment* e);

sqkd_status sqkd_experiment_write_trials(const sqkd_experiment* e, const char* csv_path);
sqkd_status sqkd_experiment_write_report(const sqkd_experiment* e, const char* json_path);
sqkd_status sqkd_experiment_secure(const sqkd_experiment* e, int* secure);
sqkd_status sqkd_experiment_key_bits(const sqkd_experiment* e, uint64_t* n_bits);

/* ---- datasets and checks --------------------------------------------------- */

/* NULL-terminated static list of figure identifiers. */
const char* const* sqkd_figure_ids(void);

/* Writes <figure_id>.csv (and companions) into out_dir. */
sqkd_status sqkd_figure(const sqkd_experiment* e, const char* figure_id, const char* out_dir);

/* Information rates over a transmittivity grid using the experiment's source
 * modulation; writes the table CSV and reports where the net rate crosses
 * zero, once per formula route. */
sqkd_status sqkd_sweep_eta(const sqkd_experiment* e, int n_points, const char* csv_path,
                           double* eta_zero_rate, double* eta_zero_info);

/* Runs the internal consistency suite. *report_text (caller-owned, free with
 * sqkd_string_free) holds one line per check; *all_pass is 1 when every
 * check passed. */
sqkd_status sqkd_validate(char** report_text, int* all_pass);

#ifdef __cplusplus
}
#endif

#endif /* SQKD_H */
