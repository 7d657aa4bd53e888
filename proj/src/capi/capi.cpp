#include "sqkd.h"

#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "core/analytic.hpp"
#include "core/config.hpp"
#include "core/device.hpp"
#include "core/error.hpp"
#include "core/experiment.hpp"
#include "core/fock.hpp"
#include "core/homodyne.hpp"
#include "core/keyrate.hpp"

using namespace sqkd;

struct sqkd_state {
  FockVector v;
};

struct sqkd_experiment {
  Config cfg;
  std::string text;
  std::optional<std::uint64_t> seed_override;
  std::optional<ProtocolArtifacts> art;
};

namespace {

thread_local std::string g_last_error = "no error";

sqkd_status map_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return SQKD_ERR_INVALID_ARGUMENT;
    case ErrorCode::TruncationTooSmall: return SQKD_ERR_TRUNCATION;
    case ErrorCode::DimensionMismatch: return SQKD_ERR_DIMENSION_MISMATCH;
    case ErrorCode::GridTooNarrow: return SQKD_ERR_GRID;
    case ErrorCode::NotCoprime: return SQKD_ERR_NOT_COPRIME;
    case ErrorCode::NonRealResult: return SQKD_ERR_NON_REAL;
    case ErrorCode::RegimeViolation: return SQKD_ERR_REGIME;
    case ErrorCode::TooFewSamples: return SQKD_ERR_TOO_FEW_SAMPLES;
    case ErrorCode::EveBelowVacuum: return SQKD_ERR_EVE_BELOW_VACUUM;
    case ErrorCode::ReconciliationFailure: return SQKD_ERR_RECONCILIATION;
    case ErrorCode::ConfigError: return SQKD_ERR_CONFIG;
    case ErrorCode::ValidationFailure: return SQKD_ERR_VALIDATION;
    case ErrorCode::IoError: return SQKD_ERR_IO;
  }
  return SQKD_ERR_UNKNOWN;
}

template <typename Fn>
sqkd_status wrap(Fn&& fn) {
  try {
    fn();
    return SQKD_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SQKD_ERR_UNKNOWN;
  } catch (...) {
    g_last_error = "unknown failure";
    return SQKD_ERR_UNKNOWN;
  }
}

sqkd_status require(bool ok, const char* msg) {
  if (ok) return SQKD_OK;
  g_last_error = msg;
  return SQKD_ERR_INVALID_ARGUMENT;
}

Quadrature to_quad(int q) {
  if (q != SQKD_QUAD_PHI && q != SQKD_QUAD_V) {
    fail(ErrorCode::InvalidArgument, "quadrature selector must be 0 or 1");
  }
  return q == SQKD_QUAD_PHI ? Quadrature::Phi : Quadrature::V;
}

}  // namespace

extern "C" {

const char* sqkd_version(void) { return sqkd::kVersion; }

const char* sqkd_last_error(void) { return g_last_error.c_str(); }

void sqkd_string_free(char* s) { delete[] s; }

sqkd_status sqkd_state_coherent(double phi, double v, int dim, sqkd_state** out) {
  if (auto st = require(out != nullptr, "null output handle")) return st;
  return wrap([&] {
    const Complex alpha = label_to_alpha(phi, v);
    const int d = dim > 0 ? dim : recommended_dim(alpha);
    *out = new sqkd_state{coherent_state(alpha, d)};
  });
}

void sqkd_state_free(sqkd_state* s) { delete s; }

sqkd_status sqkd_state_dim(const sqkd_state* s, int* dim) {
  if (auto st = require(s && dim, "null argument")) return st;
  *dim = s->v.dim();
  return SQKD_OK;
}

sqkd_status sqkd_state_displace(sqkd_state* s, double lambda) {
  if (auto st = require(s != nullptr, "null state")) return st;
  return wrap([&] { s->v = apply_displacement(s->v, lambda); });
}

sqkd_status sqkd_state_rotate(sqkd_state* s, double theta) {
  if (auto st = require(s != nullptr, "null state")) return st;
  return wrap([&] { s->v = apply_rotation(s->v, theta); });
}

sqkd_status sqkd_state_evolve(sqkd_state* s, double omega_eff, double nu, double t) {
  if (auto st = require(s != nullptr, "null state")) return st;
  return wrap([&] { s->v = kerr_evolve(s->v, omega_eff, nu, t); });
}

sqkd_status sqkd_state_moments(const sqkd_state* s, int quadrature, double* mean,
                               double* variance) {
  if (auto st = require(s && mean && variance, "null argument")) return st;
  return wrap([&] {
    const QuadratureMoments m = quadrature_moments(s->v, to_quad(quadrature));
    *mean = m.mean;
    *variance = m.variance;
  });
}

sqkd_status sqkd_state_pdf(const sqkd_state* s, int quadrature, const double* xs, size_t n,
                           double* out_pdf) {
  if (auto st = require(s && xs && out_pdf, "null argument")) return st;
  return wrap([&] {
    const std::vector<double> grid(xs, xs + n);
    const std::vector<double> pdf = quadrature_pdf(s->v, to_quad(quadrature), grid);
    std::memcpy(out_pdf, pdf.data(), n * sizeof(double));
  });
}

sqkd_status sqkd_state_sample(const sqkd_state* s, int quadrature, uint64_t seed, size_t n,
                              double* out) {
  if (auto st = require(s && out, "null argument")) return st;
  return wrap([&] {
    const HomodyneSampler sampler(s->v, to_quad(quadrature));
    Rng rng(seed);
    for (size_t i = 0; i < n; ++i) out[i] = sampler.sample(rng);
  });
}

sqkd_status sqkd_state_fidelity(const sqkd_state* a, const sqkd_state* b, double* out) {
  if (auto st = require(a && b && out, "null argument")) return st;
  return wrap([&] { *out = std::abs(overlap(a->v, b->v)); });
}

sqkd_status sqkd_variance_closed(double phi, double v, double omega_eff, double nu, double t,
                                 int quadrature, double* out) {
  if (auto st = require(out != nullptr, "null output")) return st;
  return wrap([&] { *out = variance_closed_form(phi, v, omega_eff, nu, t, to_quad(quadrature)); });
}

sqkd_status sqkd_cat_variance(double phi, double v, int even_ratio, int quadrature,
                              double* out) {
  if (auto st = require(out != nullptr, "null output")) return st;
  return wrap([&] {
    *out = cat_variance(phi, v, even_ratio ? RatioParity::Even : RatioParity::Odd,
                        to_quad(quadrature));
  });
}

sqkd_status sqkd_noise_cab(double phi, double v, double omega_eff, double nu, double t,
                           int quadrature, double* out) {
  if (auto st = require(out != nullptr, "null output")) return st;
  return wrap([&] { *out = noise_cab(phi, v, omega_eff, nu, t, to_quad(quadrature)); });
}

sqkd_status sqkd_ensemble_noise(double omega_eff, double nu, double t, double* out) {
  if (auto st = require(out != nullptr, "null output")) return st;
  return wrap([&] { *out = ensemble_noise(omega_eff, nu, t); });
}

sqkd_status sqkd_time_avg_noise(double omega_eff, double nu, double* out) {
  if (auto st = require(out != nullptr, "null output")) return st;
  return wrap([&] { *out = time_avg_noise(omega_eff, nu); });
}

sqkd_status sqkd_cat_components(int p, int q, double omega_over_nu, double phi, double v,
                                size_t cap, double* coeff_re, double* coeff_im,
                                double* alpha_re, double* alpha_im, size_t* count) {
  if (auto st = require(count != nullptr, "null count")) return st;
  return wrap([&] {
    const std::vector<CatComponent> parts =
        cat_decomposition(p, q, omega_over_nu, label_to_alpha(phi, v));
    *count = parts.size();
    const size_t n = std::min(cap, parts.size());
    for (size_t i = 0; i < n; ++i) {
      if (coeff_re) coeff_re[i] = parts[i].coeff.real();
      if (coeff_im) coeff_im[i] = parts[i].coeff.imag();
      if (alpha_re) alpha_re[i] = parts[i].alpha.real();
      if (alpha_im) alpha_im[i] = parts[i].alpha.imag();
    }
  });
}

sqkd_status sqkd_effective_params(double capacitance, double inductance, double josephson,
                                  double charge, double drive_flux, double out_params[4]) {
  if (auto st = require(out_params != nullptr, "null output")) return st;
  return wrap([&] {
    PhysicalJunctionParams p;
    p.capacitance = capacitance;
    p.inductance = inductance;
    p.josephson = josephson;
    p.charge = charge;
    p.drive_flux = drive_flux;
    const EffectiveParams eff = effective_params(p);
    out_params[0] = eff.omega;
    out_params[1] = eff.omega_eff;
    out_params[2] = eff.nu;
    out_params[3] = eff.mu;
  });
}

sqkd_status sqkd_mutual_info(double signal, double noise, double* out) {
  if (auto st = require(out != nullptr, "null output")) return st;
  return wrap([&] { *out = mutual_info_gaussian(signal, noise); });
}

sqkd_status sqkd_rate_background(double v_total, double chi, double* out) {
  if (auto st = require(out != nullptr, "null output")) return st;
  return wrap([&] { *out = secure_rate_background(v_total, chi); });
}

sqkd_status sqkd_rate_timed(double v_mod, double chi, double c_ab, double c_ae, double* out) {
  if (auto st = require(out != nullptr, "null output")) return st;
  return wrap([&] { *out = secure_rate_scheme1(v_mod, chi, c_ab, c_ae); });
}

sqkd_status sqkd_experiment_load(const char* config_path, sqkd_experiment** out) {
  if (auto st = require(config_path && out, "null argument")) return st;
  return wrap([&] {
    std::ifstream in(config_path);
    if (!in) fail(ErrorCode::IoError, std::string("cannot open config file: ") + config_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    auto* e = new sqkd_experiment;
    e->text = buf.str();
    try {
      e->cfg = parse_config_text(e->text);
    } catch (...) {
      delete e;
      throw;
    }
    *out = e;
  });
}

sqkd_status sqkd_experiment_load_text(const char* config_text, sqkd_experiment** out) {
  if (auto st = require(config_text && out, "null argument")) return st;
  return wrap([&] {
    auto* e = new sqkd_experiment;
    e->text = config_text;
    try {
      e->cfg = parse_config_text(e->text);
    } catch (...) {
      delete e;
      throw;
    }
    *out = e;
  });
}

void sqkd_experiment_free(sqkd_experiment* e) { delete e; }

sqkd_status sqkd_experiment_set_seed(sqkd_experiment* e, uint64_t seed) {
  if (auto st = require(e != nullptr, "null experiment")) return st;
  e->seed_override = seed;
  return SQKD_OK;
}

sqkd_status sqkd_experiment_set_full_numeric(sqkd_experiment* e, int on) {
  if (auto st = require(e != nullptr, "null experiment")) return st;
  e->cfg.run.full_numeric = on != 0;
  return SQKD_OK;
}

sqkd_status sqkd_experiment_has_seed(const sqkd_experiment* e, int* has) {
  if (auto st = require(e && has, "null argument")) return st;
  *has = (e->seed_override || e->cfg.run.seed) ? 1 : 0;
  return SQKD_OK;
}

sqkd_status sqkd_experiment_run(sqkd_experiment* e) {
  if (auto st = require(e != nullptr, "null experiment")) return st;
  return wrap([&] {
    std::uint64_t seed = 0;
    if (e->seed_override) {
      seed = *e->seed_override;
    } else if (e->cfg.run.seed) {
      seed = *e->cfg.run.seed;
    } else {
      fail(ErrorCode::ConfigError, "[run] seed: missing (set it or pass one explicitly)");
    }
    e->art = run_pipeline(e->cfg, seed, e->text);
  });
}

sqkd_status sqkd_experiment_write_trials(const sqkd_experiment* e, const char* csv_path) {
  if (auto st = require(e && csv_path, "null argument")) return st;
  return wrap([&] {
    if (!e->art) fail(ErrorCode::InvalidArgument, "experiment has not been run");
    write_trials_csv(csv_path, *e->art);
  });
}

sqkd_status sqkd_experiment_write_report(const sqkd_experiment* e, const char* json_path) {
  if (auto st = require(e && json_path, "null argument")) return st;
  return wrap([&] {
    if (!e->art) fail(ErrorCode::InvalidArgument, "experiment has not been run");
    write_report_json(json_path, e->cfg, *e->art);
  });
}

sqkd_status sqkd_experiment_secure(const sqkd_experiment* e, int* secure) {
  if (auto st = require(e && secure, "null argument")) return st;
  return wrap([&] {
    if (!e->art) fail(ErrorCode::InvalidArgument, "experiment has not been run");
    *secure = e->art->report.secure ? 1 : 0;
  });
}

sqkd_status sqkd_experiment_key_bits(const sqkd_experiment* e, uint64_t* n_bits) {
  if (auto st = require(e && n_bits, "null argument")) return st;
  return wrap([&] {
    if (!e->art) fail(ErrorCode::InvalidArgument, "experiment has not been run");
    *n_bits = e->art->report.final_key_bits;
  });
}

const char* const* sqkd_figure_ids(void) {
  static const char* const ids[] = {
      "variance-evolution", "ensemble-noise", "cat-distribution", "cat-squeezing-contour",
      nullptr,
  };
  return ids;
}

namespace {

sqkd::Provenance provenance_of(const sqkd_experiment* e) {
  sqkd::Provenance prov;
  prov.config_hash = fnv1a(e->text);
  if (e->seed_override) {
    prov.seed = *e->seed_override;
  } else if (e->cfg.run.seed) {
    prov.seed = *e->cfg.run.seed;
  }
  return prov;
}

}  // namespace

sqkd_status sqkd_figure(const sqkd_experiment* e, const char* figure_id, const char* out_dir) {
  if (auto st = require(e && figure_id && out_dir, "null argument")) return st;
  return wrap([&] { emit_figure(e->cfg, provenance_of(e), figure_id, out_dir); });
}

sqkd_status sqkd_sweep_eta(const sqkd_experiment* e, int n_points, const char* csv_path,
                           double* eta_zero_rate, double* eta_zero_info) {
  if (auto st = require(e && csv_path, "null argument")) return st;
  return wrap([&] {
    const SweepResult res = sweep_eta(e->cfg.source.v_mod, n_points);
    write_sweep_csv(csv_path, res, provenance_of(e));
    if (eta_zero_rate) *eta_zero_rate = res.eta_zero_rate;
    if (eta_zero_info) *eta_zero_info = res.eta_zero_info;
  });
}

sqkd_status sqkd_validate(char** report_text, int* all_pass) {
  if (auto st = require(report_text && all_pass, "null argument")) return st;
  return wrap([&] {
    const std::vector<CheckResult> checks = run_validation();
    std::ostringstream out;
    bool ok = true;
    for (const CheckResult& c : checks) {
      out << (c.pass ? "PASS" : "FAIL") << " " << c.name << ": " << c.detail << "\n";
      ok = ok && c.pass;
    }
    const std::string text = out.str();
    char* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *report_text = buf;
    *all_pass = ok ? 1 : 0;
  });
}

}  // extern "C"
