#include "core/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "core/analytic.hpp"
#include "core/device.hpp"
#include "core/error.hpp"
#include "core/homodyne.hpp"
#include "json.hpp"

namespace sqkd {
namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path);
  return out;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    xs[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  }
  xs.back() = b;  // exact endpoint regardless of rounding
  return xs;
}

// Dedicated stream index for post-processing draws; round streams use their
// own record index, which stays far below this.
constexpr std::uint64_t kDistillStream = 0x8000000000000000ull;

}  // namespace

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string provenance_line(const Provenance& prov) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "# sqkd %s, config 0x%016llx, seed %s", kVersion,
                static_cast<unsigned long long>(prov.config_hash),
                prov.seed ? std::to_string(*prov.seed).c_str() : "none");
  return buf;
}

ProtocolArtifacts run_pipeline(const Config& cfg, std::uint64_t seed,
                               const std::string& config_text) {
  ProtocolArtifacts art;
  art.seed = seed;
  art.config_hash = fnv1a(config_text);

  RunOptions opts;
  opts.seed = seed;
  opts.rounds = cfg.run.rounds;
  opts.full_numeric = cfg.run.full_numeric;
  opts.grid_points = cfg.run.grid_points;
  opts.dim = cfg.run.dim;
  opts.threads = cfg.run.threads;

  art.trials = run_protocol(cfg.source, cfg.channel, cfg.scheme, cfg.effective, opts);
  art.pairs = sift(art.trials, cfg.scheme, cfg.channel);

  const double chi = (1.0 - cfg.channel.eta) / cfg.channel.eta + cfg.channel.excess_noise;
  art.report = estimate_key_rate(art.pairs.alice, art.pairs.bob, art.pairs.eve, chi);

  if (art.report.secure) {
    Rng rng = Rng::for_index(seed, kDistillStream);
    ReconcileResult rec =
        slice_reconcile(art.pairs.alice, art.pairs.bob, cfg.run.slices, rng);
    art.slices = rec.slices;
    art.report.reconciled_bits = rec.alice_bits.size();
    art.report.leaked_bits = rec.leaked_bits;
    art.key = privacy_amplify(rec.alice_bits, rec.leaked_bits, art.pairs.alice.size(),
                              art.report.delta_i, art.report.i_ae_bound, rng);
    art.report.final_key_bits = art.key.size();
  }
  return art;
}

void write_trials_csv(const std::string& path, const ProtocolArtifacts& art) {
  std::ofstream out = open_out(path);
  out << provenance_line({art.config_hash, art.seed}) << "\n";
  out << "index, phi_A, v_A, t_meas, basis, outcome, eve_outcome\n";
  for (const TrialRecord& r : art.trials) {
    out << r.index << ", " << fmt(r.phi_a) << ", " << fmt(r.v_a) << ", " << fmt(r.t_meas)
        << ", " << (r.basis == Quadrature::Phi ? "phi" : "v") << ", " << fmt(r.outcome)
        << ", " << (r.eve_outcome ? fmt(*r.eve_outcome) : std::string()) << "\n";
  }
}

void write_report_json(const std::string& path, const Config& cfg,
                       const ProtocolArtifacts& art) {
  nlohmann::json j;
  char hash[20];
  std::snprintf(hash, sizeof hash, "0x%016llx",
                static_cast<unsigned long long>(art.config_hash));
  j["seed"] = art.seed;
  j["config_hash"] = hash;
  j["scheme"] = cfg.scheme.kind == MeasurementScheme::Kind::TimeStamped ? "time-stamped"
                                                                        : "arbitrary-time";
  j["rounds"] = art.report.rounds;
  j["source"] = {{"v_mod", cfg.source.v_mod},
                 {"phi_center", cfg.source.phi_center},
                 {"v_center", cfg.source.v_center}};
  j["channel"] = {{"eta", cfg.channel.eta},
                  {"excess_noise", cfg.channel.excess_noise},
                  {"chi", art.report.chi}};
  nlohmann::json est;
  est["signal"] = art.report.signal;
  est["noise_ab"] = art.report.noise_ab;
  est["noise_ab_se"] = art.report.noise_ab_se;
  est["i_ab"] = art.report.i_ab;
  est["i_ae_bound"] = art.report.i_ae_bound;
  if (art.report.i_ae_empirical >= 0.0) {
    est["i_ae_empirical"] = art.report.i_ae_empirical;
  } else {
    est["i_ae_empirical"] = nullptr;
  }
  est["delta_i"] = art.report.delta_i;
  est["secure"] = art.report.secure;
  j["estimate"] = est;

  nlohmann::json dist;
  dist["reconciled_bits"] = art.report.reconciled_bits;
  dist["leaked_bits"] = art.report.leaked_bits;
  dist["final_key_bits"] = art.report.final_key_bits;
  dist["slices"] = nlohmann::json::array();
  for (const SliceSummary& s : art.slices) {
    dist["slices"].push_back({{"predicted_ber", s.predicted_ber},
                              {"disclosed", s.disclosed},
                              {"leaked", s.leaked}});
  }
  j["distillation"] = dist;

  std::ofstream out = open_out(path);
  out << j.dump(2) << "\n";
}

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids = {
      "variance-evolution",
      "ensemble-noise",
      "cat-distribution",
      "cat-squeezing-contour",
  };
  return ids;
}

namespace {

// Fixed plot parameters; the config only supplies the frequency scale nu.

void emit_variance_evolution(double nu, const Provenance& prov, const std::string& path) {
  const double phi = 0.3, v = 0.3;
  const double om = 5.0 * nu;
  const double period = 2.0 * M_PI / nu;

  std::ofstream out = open_out(path);
  out << provenance_line(prov) << "\n";
  out << "t, var_phi, var_v, product\n";
  const int n = 601;
  for (int i = 0; i < n; ++i) {
    const double t = period * i / (n - 1);
    const double vp = variance_closed_form(phi, v, om, nu, t, Quadrature::Phi);
    const double vv = variance_closed_form(phi, v, om, nu, t, Quadrature::V);
    out << fmt(t) << ", " << fmt(vp) << ", " << fmt(vv) << ", " << fmt(vp * vv) << "\n";
  }
}

void emit_ensemble_noise(double nu, int ratio, const Provenance& prov,
                         const std::string& path) {
  const double period = 2.0 * M_PI / nu;
  std::ofstream out = open_out(path);
  out << provenance_line(prov) << "\n";
  out << "t, noise\n";
  const int n = 801;
  for (int i = 0; i < n; ++i) {
    const double t = period * i / (n - 1);
    out << fmt(t) << ", " << fmt(ensemble_noise(ratio * nu, nu, t)) << "\n";
  }
}

void emit_cat_distribution(double nu, const Provenance& prov, const std::string& path) {
  const double om = 100.0 * nu;
  const double phi = 4.0, v = 4.0;
  const double t = 0.5 * M_PI / nu;  // quarter period: two components

  FockVector s = coherent_state(phi, v, recommended_dim(label_to_alpha(phi, v)));
  s = kerr_evolve(s, om, nu, t);
  // The bimodal variance is ~0.5 + phi^2, so the normalization guard wants a
  // grid far wider than the visible peaks.
  const std::vector<double> xs = linspace(-33.0, 33.0, 1651);
  const std::vector<double> p_phi = quadrature_pdf(s, Quadrature::Phi, xs);
  const std::vector<double> p_v = quadrature_pdf(s, Quadrature::V, xs);

  std::ofstream out = open_out(path);
  out << provenance_line(prov) << "\n";
  out << "x, pdf_phi, pdf_v\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out << fmt(xs[i]) << ", " << fmt(p_phi[i]) << ", " << fmt(p_v[i]) << "\n";
  }
}

void emit_cat_contour(const Provenance& prov, const std::string& path,
                      const std::string& seg_path) {
  const int n = 121;
  const std::vector<double> phis = linspace(0.0, 3.0, n);
  const std::vector<double> vs = linspace(0.0, 3.0, n);
  std::vector<double> var_phi(static_cast<std::size_t>(n) * n);
  std::vector<double> var_v(static_cast<std::size_t>(n) * n);
  std::ofstream out = open_out(path);
  out << provenance_line(prov) << "\n";
  out << "phi, v, var_phi, var_v\n";
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double fp = cat_variance(phis[i], vs[j], RatioParity::Even, Quadrature::Phi);
      const double fv = cat_variance(phis[i], vs[j], RatioParity::Even, Quadrature::V);
      var_phi[static_cast<std::size_t>(j) * n + i] = fp;
      var_v[static_cast<std::size_t>(j) * n + i] = fv;
      out << fmt(phis[i]) << ", " << fmt(vs[j]) << ", " << fmt(fp) << ", " << fmt(fv) << "\n";
    }
  }
  std::ofstream seg = open_out(seg_path);
  seg << provenance_line(prov) << "\n";
  seg << "quadrature, level, phi0, v0, phi1, v1\n";
  const std::vector<double> levels = {0.5, 0.4};
  auto write_segments = [&](const char* name, const std::vector<double>& field) {
    for (const ContourSegment& s : contour_segments(phis, vs, field, levels)) {
      seg << name << ", " << fmt(s.level) << ", " << fmt(s.x0) << ", " << fmt(s.y0) << ", "
          << fmt(s.x1) << ", " << fmt(s.y1) << "\n";
    }
  };
  write_segments("phi", var_phi);
  write_segments("v", var_v);
}

}  // namespace

void emit_figure(const Config& cfg, const Provenance& prov, const std::string& id,
                 const std::string& out_dir) {
  const std::string base = out_dir + "/" + id;
  const double nu = cfg.effective.nu;
  if (id == "variance-evolution") {
    emit_variance_evolution(nu, prov, base + ".csv");
  } else if (id == "ensemble-noise") {
    emit_ensemble_noise(nu, 5, prov, base + "-ratio5.csv");
    emit_ensemble_noise(nu, 6, prov, base + "-ratio6.csv");
  } else if (id == "cat-distribution") {
    emit_cat_distribution(nu, prov, base + ".csv");
  } else if (id == "cat-squeezing-contour") {
    emit_cat_contour(prov, base + ".csv", base + "-segments.csv");
  } else {
    fail(ErrorCode::InvalidArgument, "unknown figure id: " + id);
  }
}

SweepResult sweep_eta(double v_mod, int n_points) {
  if (v_mod <= 0.0) fail(ErrorCode::InvalidArgument, "modulation variance must be positive");
  if (n_points < 2) fail(ErrorCode::InvalidArgument, "sweep needs at least 2 points");

  const double lo = 0.02, hi = 1.0;
  auto chi_of = [](double eta) { return std::max(0.0, (1.0 - eta) / eta); };
  auto i_ab_of = [&](double chi) {
    return mutual_info_gaussian(v_mod * kVacuumNoise, kVacuumNoise * (1.0 + chi));
  };
  auto i_ae_of = [&](double chi) {
    return mutual_info_gaussian(v_mod * chi * kVacuumNoise, kVacuumNoise * (1.0 + chi));
  };
  auto rate = [&](double eta) { return secure_rate_background(1.0 + v_mod, chi_of(eta)); };
  auto info = [&](double eta) {
    const double chi = chi_of(eta);
    return i_ab_of(chi) - i_ae_of(chi);
  };

  SweepResult res;
  res.rows.reserve(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    SweepRow row;
    row.eta = (i == n_points - 1) ? hi : lo + (hi - lo) * i / (n_points - 1);
    row.chi = chi_of(row.eta);
    row.i_ab = i_ab_of(row.chi);
    row.i_ae_bound = i_ae_of(row.chi);
    row.delta_i = row.i_ab - row.i_ae_bound;
    row.secure = row.delta_i > 0.0;
    res.rows.push_back(row);
  }

  auto bisect = [&](auto&& f) {
    double a = lo, b = hi;
    double fa = f(a);
    if (fa * f(b) > 0.0) return 0.0;
    for (int it = 0; it < 200; ++it) {
      const double m = 0.5 * (a + b);
      const double fm = f(m);
      if ((fa < 0.0) == (fm < 0.0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    return 0.5 * (a + b);
  };
  res.eta_zero_rate = bisect(rate);
  res.eta_zero_info = bisect(info);
  return res;
}

void write_sweep_csv(const std::string& path, const SweepResult& sweep,
                     const Provenance& prov) {
  std::ofstream out = open_out(path);
  out << provenance_line(prov) << "\n";
  out << "# delta_i zero crossing: rate formula " << fmt(sweep.eta_zero_rate)
      << ", info difference " << fmt(sweep.eta_zero_info) << "\n";
  out << "eta, chi, i_ab, i_ae_bound, delta_i, secure\n";
  for (const SweepRow& r : sweep.rows) {
    out << fmt(r.eta) << ", " << fmt(r.chi) << ", " << fmt(r.i_ab) << ", "
        << fmt(r.i_ae_bound) << ", " << fmt(r.delta_i) << ", " << (r.secure ? 1 : 0) << "\n";
  }
}

std::vector<ContourSegment> contour_segments(const std::vector<double>& xs,
                                             const std::vector<double>& ys,
                                             const std::vector<double>& f,
                                             const std::vector<double>& levels) {
  const std::size_t nx = xs.size(), ny = ys.size();
  if (nx < 2 || ny < 2 || f.size() != nx * ny) {
    fail(ErrorCode::InvalidArgument, "contour grid shape mismatch");
  }
  std::vector<ContourSegment> segs;

  // Cell corners counterclockwise from bottom-left; edges 0..3 are bottom,
  // right, top, left.
  static const int kEdgeTable[16][4] = {
      {-1, -1, -1, -1}, {3, 0, -1, -1}, {0, 1, -1, -1}, {3, 1, -1, -1},
      {1, 2, -1, -1},   {3, 2, 0, 1},   {0, 2, -1, -1}, {3, 2, -1, -1},
      {2, 3, -1, -1},   {0, 2, -1, -1}, {0, 3, 1, 2},   {1, 2, -1, -1},
      {1, 3, -1, -1},   {0, 1, -1, -1}, {3, 0, -1, -1}, {-1, -1, -1, -1},
  };

  for (double level : levels) {
    for (std::size_t j = 0; j + 1 < ny; ++j) {
      for (std::size_t i = 0; i + 1 < nx; ++i) {
        const double c[4] = {f[j * nx + i], f[j * nx + i + 1], f[(j + 1) * nx + i + 1],
                             f[(j + 1) * nx + i]};
        int idx = 0;
        for (int k = 0; k < 4; ++k) {
          if (c[k] > level) idx |= 1 << k;
        }
        if (idx == 0 || idx == 15) continue;

        auto edge_point = [&](int e, double& px, double& py) {
          static const int kEnds[4][2] = {{0, 1}, {1, 2}, {3, 2}, {0, 3}};
          const int a = kEnds[e][0], b = kEnds[e][1];
          const double fa = c[a], fb = c[b];
          const double t = (fb == fa) ? 0.5 : (level - fa) / (fb - fa);
          const double ax = (a == 1 || a == 2) ? xs[i + 1] : xs[i];
          const double ay = (a >= 2) ? ys[j + 1] : ys[j];
          const double bx = (b == 1 || b == 2) ? xs[i + 1] : xs[i];
          const double by = (b >= 2) ? ys[j + 1] : ys[j];
          px = ax + t * (bx - ax);
          py = ay + t * (by - ay);
        };

        for (int s = 0; s < 4 && kEdgeTable[idx][s] >= 0; s += 2) {
          ContourSegment seg;
          seg.level = level;
          edge_point(kEdgeTable[idx][s], seg.x0, seg.y0);
          edge_point(kEdgeTable[idx][s + 1], seg.x1, seg.y1);
          segs.push_back(seg);
        }
      }
    }
  }
  return segs;
}

std::vector<CheckResult> run_validation() {
  std::vector<CheckResult> out;
  auto run = [&](const std::string& name, auto&& body) {
    CheckResult r;
    r.name = name;
    try {
      body(r);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    out.push_back(std::move(r));
  };

  run("coherent-moments", [](CheckResult& r) {
    const FockVector s = coherent_state(1.2, -0.7, recommended_dim(label_to_alpha(1.2, -0.7)));
    const QuadratureMoments mp = quadrature_moments(s, Quadrature::Phi);
    const QuadratureMoments mv = quadrature_moments(s, Quadrature::V);
    const double err = std::max({std::abs(mp.mean - 1.2), std::abs(mv.mean + 0.7),
                                 std::abs(mp.variance - 0.5), std::abs(mv.variance - 0.5)});
    r.pass = err < 1e-10;
    r.detail = "max moment error " + fmt(err);
  });

  run("variance-closed-form", [](CheckResult& r) {
    Rng rng(20240518);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const double phi = rng.uniform(-2.0, 2.0), v = rng.uniform(-2.0, 2.0);
      const double nu = 0.7, om = nu * rng.uniform(20.0, 40.0);
      const double t = rng.uniform(0.0, 2.0 * M_PI / nu);
      const FockVector s = kerr_evolve(
          coherent_state(phi, v, recommended_dim(label_to_alpha(phi, v))), om, nu, t);
      for (Quadrature q : {Quadrature::Phi, Quadrature::V}) {
        const double a = variance_closed_form(phi, v, om, nu, t, q);
        const double b = quadrature_moments(s, q).variance;
        worst = std::max(worst, std::abs(a - b));
      }
    }
    r.pass = worst < 1e-8;
    r.detail = "max |closed - numeric| " + fmt(worst);
  });

  run("transmission-noise", [](CheckResult& r) {
    Rng rng(77001);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const double phi = rng.uniform(-2.0, 2.0), v = rng.uniform(-2.0, 2.0);
      const double nu = 1.1, om = nu * rng.uniform(20.0, 40.0);
      const double t = rng.uniform(0.0, 2.0 * M_PI / nu);
      const FockVector s = kerr_evolve(
          coherent_state(phi, v, recommended_dim(label_to_alpha(phi, v))), om, nu, t);
      for (Quadrature q : {Quadrature::Phi, Quadrature::V}) {
        const QuadratureMoments m = quadrature_moments(s, q);
        const double label = q == Quadrature::Phi ? phi : v;
        const double direct = m.variance + (m.mean - label) * (m.mean - label);
        worst = std::max(worst, std::abs(noise_cab(phi, v, om, nu, t, q) - direct));
      }
    }
    r.pass = worst < 1e-8;
    r.detail = "max |closed - numeric| " + fmt(worst);
  });

  run("revival", [](CheckResult& r) {
    const double nu = 0.9, om = 7.0 * nu;
    const Complex alpha = label_to_alpha(1.3, 0.4);
    const FockVector s0 = coherent_state(alpha, recommended_dim(alpha));
    const FockVector s1 = kerr_evolve(s0, om, nu, 2.0 * M_PI / nu);
    const double fidelity = std::abs(overlap(s0, s1));
    r.pass = fidelity > 1.0 - 1e-9;
    r.detail = "full-period fidelity " + fmt(fidelity);
  });

  run("cat-decomposition", [](CheckResult& r) {
    const double nu = 1.0, om = 6.0 * nu;
    const Complex alpha = label_to_alpha(1.4, 0.9);
    const int dim = recommended_dim(alpha);
    const FockVector evolved = kerr_evolve(coherent_state(alpha, dim), om, nu, M_PI / (2.0 * nu));
    const std::vector<CatComponent> parts = cat_decomposition(1, 2, om / nu, alpha);
    FockVector rebuilt;
    rebuilt.amps.assign(static_cast<std::size_t>(dim), Complex(0.0, 0.0));
    for (const CatComponent& p : parts) {
      const FockVector piece = coherent_state(p.alpha, dim);
      for (int n = 0; n < dim; ++n) rebuilt.amps[static_cast<std::size_t>(n)] += p.coeff * piece.amps[static_cast<std::size_t>(n)];
    }
    double diff = 0.0;
    for (int n = 0; n < dim; ++n) {
      diff += std::norm(rebuilt.amps[static_cast<std::size_t>(n)] - evolved.amps[static_cast<std::size_t>(n)]);
    }
    r.pass = std::sqrt(diff) < 1e-9;
    r.detail = "state difference " + fmt(std::sqrt(diff));
  });

  run("sampler-statistics", [](CheckResult& r) {
    const FockVector vac = coherent_state(Complex(0.0, 0.0), 16);
    const HomodyneSampler sampler(vac, Quadrature::Phi);
    Rng rng(31337);
    const int n = 20000;
    std::vector<double> draws(n);
    for (double& d : draws) d = sampler.sample(rng);
    std::sort(draws.begin(), draws.end());
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
      const double c = 0.5 * std::erfc(-draws[static_cast<std::size_t>(i)]);
      ks = std::max(ks, std::max(std::abs(c - static_cast<double>(i) / n),
                                 std::abs(c - static_cast<double>(i + 1) / n)));
    }
    r.pass = ks < 0.015;
    r.detail = "KS distance " + fmt(ks);
  });

  run("rate-identity", [](CheckResult& r) {
    double worst = 0.0;
    for (double v : {1.0, 1.5, 2.0, 9.0}) {
      for (double chi : {0.0, 0.1, 0.5, 1.0, 3.0}) {
        worst = std::max(worst, std::abs(secure_rate_background(v, chi) -
                                         secure_rate_background_snr(v, chi)));
      }
    }
    r.pass = worst < 1e-12;
    r.detail = "max route mismatch " + fmt(worst);
  });

  run("reconciliation", [](CheckResult& r) {
    Rng rng(9090);
    const int n = 3000;
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a[static_cast<std::size_t>(i)] = rng.gaussian(0.0, 2.0);
      b[static_cast<std::size_t>(i)] =
          a[static_cast<std::size_t>(i)] + rng.gaussian(0.0, std::sqrt(0.625));
    }
    const ReconcileResult rec = slice_reconcile(a, b, 4, rng);
    r.pass = rec.alice_bits == rec.bob_bits && rec.leaked_bits < rec.alice_bits.size();
    r.detail = "leaked " + std::to_string(rec.leaked_bits) + " of " +
               std::to_string(rec.alice_bits.size()) + " bits";
  });

  run("device-regime", [](CheckResult& r) {
    PhysicalJunctionParams p;
    p.capacitance = 1e-3;
    p.inductance = 2.4507e-5;
    p.josephson = 15301.5;
    p.charge = 1.0;
    p.drive_flux = 110.15;
    const EffectiveParams eff = effective_params(p);
    bool rejected = false;
    try {
      PhysicalJunctionParams weak = p;
      weak.drive_flux = 1e-4;
      effective_params(weak);
    } catch (const Error& e) {
      rejected = e.code() == ErrorCode::RegimeViolation;
    }
    r.pass = eff.omega_eff / eff.nu >= 20.0 && eff.mu / eff.omega_eff >= 100.0 && rejected;
    r.detail = "ratio " + fmt(eff.omega_eff / eff.nu) + ", drive " + fmt(eff.mu / eff.omega_eff);
  });

  run("ensemble-endpoints", [](CheckResult& r) {
    const double nu = 1.3;
    const double at_zero = ensemble_noise(6.0 * nu, nu, 0.0);
    const double at_half = ensemble_noise(6.0 * nu, nu, M_PI / nu);
    const double err = std::max(std::abs(at_zero - 0.5), std::abs(at_half - 2.5));
    r.pass = err < 1e-9;
    r.detail = "endpoint error " + fmt(err);
  });

  return out;
}

}  // namespace sqkd
