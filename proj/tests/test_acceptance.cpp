// Release gate. Each check prints exactly one PASS/FAIL line; the process
// exits nonzero when any check fails. Tolerances are pinned here and are not
// configurable.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "core/analytic.hpp"
#include "core/config.hpp"
#include "core/experiment.hpp"
#include "core/fock.hpp"
#include "core/homodyne.hpp"
#include "core/keyrate.hpp"
#include "core/protocol.hpp"
#include "core/rng.hpp"

using namespace sqkd;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), pattern, a, b);
  return buf;
}

// Sum of coeff_l |alpha_l> in a fixed dimension.
FockVector rebuild(const std::vector<CatComponent>& parts, int dim) {
  FockVector s;
  s.amps.assign(static_cast<std::size_t>(dim), Complex(0.0, 0.0));
  for (const CatComponent& p : parts) {
    const FockVector piece = coherent_state(p.alpha, dim);
    for (int n = 0; n < dim; ++n) s.amps[static_cast<std::size_t>(n)] += p.coeff * piece.amps[static_cast<std::size_t>(n)];
  }
  return s;
}

// 1. Half-period collapse onto |-alpha> and full-period revival onto |alpha>
//    for an even frequency ratio, |alpha| up to 3.
bool check_collapse_revival(std::string& detail) {
  const double nu = 1.0, om = 100.0 * nu;
  const std::vector<std::pair<double, double>> labels = {
      {1.0, 0.0}, {0.0, 1.0}, {2.0, 2.0}, {-2.0, 1.0}, {3.0, 3.0}, {1.2, -0.7}};
  double worst = 0.0;
  for (const auto& [phi, v] : labels) {
    const Complex alpha = label_to_alpha(phi, v);
    const int dim = recommended_dim(alpha);
    const FockVector start = coherent_state(alpha, dim);
    const FockVector half = kerr_evolve(start, om, nu, kPi / nu);
    const FockVector full = kerr_evolve(start, om, nu, 2.0 * kPi / nu);
    worst = std::max(worst, std::abs(std::abs(overlap(half, coherent_state(-alpha, dim))) - 1.0));
    worst = std::max(worst, std::abs(std::abs(overlap(full, start)) - 1.0));
  }
  detail = fmt("worst |overlap - 1| = %.3g (tol 1e-9)", worst);
  return worst <= 1e-9;
}

// 2. Fractional-period decompositions reproduce direct evolution; the
//    half-period pair carries the exact balanced pi/4 weights.
bool check_cat_decomposition(std::string& detail) {
  const double nu = 1.0, ratio = 6.0;
  const Complex alpha = label_to_alpha(1.4, 0.9);
  const int dim = recommended_dim(alpha);
  double worst = 0.0;
  for (const auto& [p, q] : std::vector<std::pair<int, int>>{{1, 2}, {1, 3}, {2, 3}, {1, 4}}) {
    const double t = kPi * p / (q * nu);
    const FockVector direct = kerr_evolve(coherent_state(alpha, dim), ratio * nu, nu, t);
    const FockVector sum = rebuild(cat_decomposition(p, q, ratio, alpha), dim);
    worst = std::max(worst, std::abs(std::abs(overlap(direct, sum)) - 1.0));
  }

  double coeff_err = 0.0;
  const std::vector<CatComponent> pair = cat_decomposition(1, 2, ratio, alpha);
  if (pair.size() != 2) {
    detail = "half-period decomposition is not two components";
    return false;
  }
  std::vector<double> args;
  for (const CatComponent& c : pair) {
    coeff_err = std::max(coeff_err, std::abs(std::abs(c.coeff) - 1.0 / std::sqrt(2.0)));
    args.push_back(std::arg(c.coeff));
  }
  std::sort(args.begin(), args.end());
  coeff_err = std::max(coeff_err, std::abs(args[0] + kPi / 4.0));
  coeff_err = std::max(coeff_err, std::abs(args[1] - kPi / 4.0));

  detail = fmt("worst |overlap - 1| = %.3g (tol 1e-9), coeff error %.3g (tol 1e-12)", worst,
               coeff_err);
  return worst <= 1e-9 && coeff_err <= 1e-12;
}

// 3. Closed-form variances track the truncated basis at 200 random points;
//    the uncertainty product never drops below 1/4 and touches it only near
//    revivals (half or full period; the ratio here is odd).
bool check_variance_agreement(std::string& detail) {
  const double nu = 1.0, om = 5.0 * nu;
  Rng rng(20260815);
  double worst = 0.0, min_product = 1e300;
  bool product_localized = true;
  for (int k = 0; k < 200; ++k) {
    double phi = 0.0, v = 0.0;
    // Near-vacuum labels sit on the uncertainty floor at every time, which
    // says nothing about revivals; keep the draws clear of the origin.
    do {
      phi = rng.uniform(-2.0, 2.0);
      v = rng.uniform(-2.0, 2.0);
    } while (phi * phi + v * v < 0.5);
    const double t = rng.uniform(0.0, 2.0 * kPi / nu);
    const Complex alpha = label_to_alpha(phi, v);
    const FockVector state = kerr_evolve(coherent_state(alpha, recommended_dim(alpha)), om, nu, t);
    double closed[2];
    for (Quadrature q : {Quadrature::Phi, Quadrature::V}) {
      const double c = variance_closed_form(phi, v, om, nu, t, q);
      closed[q == Quadrature::Phi ? 0 : 1] = c;
      worst = std::max(worst, std::abs(c - quadrature_moments(state, q).variance));
    }
    const double product = closed[0] * closed[1];
    min_product = std::min(min_product, product);
    if (product <= 0.25 + 1e-6) {
      const double frac = t * nu / (2.0 * kPi);
      const double dist = std::min({frac, std::abs(frac - 0.5), std::abs(frac - 1.0)});
      if (dist >= 0.02) product_localized = false;
    }
  }
  detail = fmt("worst |closed - numeric| = %.3g (tol 1e-8), min product - 1/4 = %.3g", worst,
               min_product - 0.25);
  if (!product_localized) detail += ", minimum-uncertainty point away from a revival";
  return worst <= 1e-8 && min_product >= 0.25 - 1e-9 && product_localized;
}

// 4. Ensemble-averaged transmission noise: exact endpoints, and agreement
//    with a 1e5-sample Monte Carlo of the single-shot noise at 10 times.
bool check_ensemble_noise(std::string& detail) {
  const double nu = 1.0, om = 6.0 * nu;
  const double end0 = std::abs(ensemble_noise(om, nu, 0.0) - 0.5);
  const double endh = std::abs(ensemble_noise(om, nu, kPi / nu) - 2.5);
  Rng rng(11);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const double t = rng.uniform(0.0, 2.0 * kPi / nu);
    double acc = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
      const double phi = rng.gaussian(0.0, std::sqrt(0.5));
      const double v = rng.gaussian(0.0, std::sqrt(0.5));
      acc += 0.5 * (noise_cab(phi, v, om, nu, t, Quadrature::Phi) +
                    noise_cab(phi, v, om, nu, t, Quadrature::V));
    }
    worst = std::max(worst, std::abs(acc / n - ensemble_noise(om, nu, t)));
  }
  detail = fmt("endpoint errors %.3g, worst MC deviation %.3g (tol 0.02)",
               std::max(end0, endh), worst);
  return end0 <= 1e-12 && endh <= 1e-9 && worst <= 0.02;
}

double mc_mutual_info(const MeasurementScheme& scheme, double phi_center, double v_center,
                      std::uint64_t seed) {
  SourceConfig src;
  src.v_mod = 1.0;
  src.phi_center = phi_center;
  src.v_center = v_center;
  ChannelConfig ch;  // lossless
  EffectiveParams eff;
  eff.omega = 10100.0;
  eff.nu = 100.0;
  eff.omega_eff = eff.omega - eff.nu;
  RunOptions opts;
  opts.seed = seed;
  opts.rounds = 100000;
  const std::vector<TrialRecord> trials = run_protocol(src, ch, scheme, eff, opts);
  const SiftedPairs pairs = sift(trials, scheme, ch);
  return estimate_key_rate(pairs.alice, pairs.bob, pairs.eve, 0.0).i_ab;
}

// 5. Headline numbers: time-averaged noise 3/2, and the per-round mutual
//    information of both measurement schemes over 1e5 lossless rounds.
bool check_headline_rates(std::string& detail) {
  const double avg = time_avg_noise(200.0, 1.0);
  const double i1 = mc_mutual_info(MeasurementScheme::arbitrary_time(), 0.0, 0.0, 515253);
  const double i2 = mc_mutual_info(MeasurementScheme::time_stamped(), 4.0, 4.0, 616263);
  detail = fmt("time average %.6f (want 1.5 +- 2e-3), ", avg) +
           fmt("I_AB %.4f (want 0.2075 +- 0.005) / %.4f (want 0.500 +- 0.005)", i1, i2);
  return std::abs(avg - 1.5) <= 2e-3 && std::abs(i1 - 0.2075) <= 0.005 &&
         std::abs(i2 - 0.500) <= 0.005;
}

// 6. Both sweep variants put the security boundary at eta = 1/2, and every
//    grid point above it keeps a positive advantage.
bool check_security_boundary(std::string& detail) {
  const SweepResult s = sweep_eta(1.0, 197);
  bool positive_above = true;
  for (const SweepRow& r : s.rows) {
    if (r.eta >= 0.5001 && (!(r.delta_i > 0.0) || !r.secure)) positive_above = false;
  }
  detail = fmt("zero crossings %.6f / %.6f (want 0.500 +- 1e-3)", s.eta_zero_rate,
               s.eta_zero_info);
  if (!positive_above) detail += ", advantage not positive above the boundary";
  return std::abs(s.eta_zero_rate - 0.5) <= 1e-3 && std::abs(s.eta_zero_info - 0.5) <= 1e-3 &&
         positive_above;
}

std::string pipeline_config(double eta) {
  return "[effective]\nomega = 10100\nnu = 100\n"
         "[source]\nv_mod = 8.0\nphi_center = 8.0\nv_center = 8.0\n"
         "[channel]\neta = " +
         fmt("%.1f", eta) +
         "\n[scheme]\nkind = time-stamped\n"
         "[run]\nrounds = 100000\nslices = 4\n";
}

// 7. Full pipeline at 1e5 rounds: a moderately lossy channel still distills
//    a key through error-free reconciliation; past the boundary the run is
//    reported insecure and the key stays empty. Reconciliation raises on any
//    residual mismatch, so a nonempty key certifies an error-free string.
bool check_pipeline(std::string& detail) {
  const std::string good_text = pipeline_config(0.8);
  const ProtocolArtifacts good = run_pipeline(parse_config_text(good_text), 90210, good_text);
  const std::string bad_text = pipeline_config(0.4);
  const ProtocolArtifacts bad = run_pipeline(parse_config_text(bad_text), 31337, bad_text);
  detail = fmt("eta 0.8: %.0f key bits", static_cast<double>(good.key.size()));
  detail += fmt(" from %.0f reconciled; ", static_cast<double>(good.report.reconciled_bits));
  detail += std::string("eta 0.4: ") + (bad.report.secure ? "secure" : "insecure") +
            fmt(", %.0f key bits", static_cast<double>(bad.key.size()));
  return good.report.secure && good.report.reconciled_bits > 0 && !good.key.empty() &&
         !bad.report.secure && bad.key.empty();
}

double ks_statistic(const FockVector& state, Quadrature q, std::uint64_t seed, int n) {
  HomodyneSampler smp(state, q);
  Rng rng(seed);
  std::vector<double> draws(static_cast<std::size_t>(n));
  for (double& x : draws) x = smp.sample(rng);
  std::sort(draws.begin(), draws.end());

  // Reference CDF on a fine independent grid.
  const QuadratureMoments m = quadrature_moments(state, q);
  const double span = 12.0 * std::max(1.0, std::sqrt(m.variance));
  const int g = 32769;
  std::vector<double> xs(g);
  for (int i = 0; i < g; ++i) {
    xs[static_cast<std::size_t>(i)] = m.mean - span + 2.0 * span * i / (g - 1);
  }
  const std::vector<double> pdf = quadrature_pdf(state, q, xs);
  std::vector<double> cdf(static_cast<std::size_t>(g), 0.0);
  for (int i = 1; i < g; ++i) {
    cdf[static_cast<std::size_t>(i)] =
        cdf[static_cast<std::size_t>(i - 1)] +
        0.5 * (pdf[static_cast<std::size_t>(i)] + pdf[static_cast<std::size_t>(i - 1)]) *
            (xs[static_cast<std::size_t>(i)] - xs[static_cast<std::size_t>(i - 1)]);
  }
  for (double& c : cdf) c /= cdf.back();

  auto ref = [&](double x) {
    if (x <= xs.front()) return 0.0;
    if (x >= xs.back()) return 1.0;
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin());
    const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return cdf[i - 1] + w * (cdf[i] - cdf[i - 1]);
  };

  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    const double f = ref(draws[static_cast<std::size_t>(i)]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
  }
  return d;
}

// 8. Sampler draws pass a 1% Kolmogorov-Smirnov test against the quadrature
//    density for the vacuum, a displaced state, and a quarter-period cat.
bool check_sampler_fidelity(std::string& detail) {
  const int n = 100000;
  const double threshold = 1.628 / std::sqrt(static_cast<double>(n));

  const FockVector vacuum = coherent_state(0.0, 0.0, 32);
  const Complex disp = label_to_alpha(2.0, 1.0);
  const FockVector displaced = coherent_state(disp, recommended_dim(disp));
  const Complex big = label_to_alpha(4.0, 4.0);
  const FockVector cat =
      kerr_evolve(coherent_state(big, recommended_dim(big)), 100.0, 1.0, 0.5 * kPi);

  const double d1 = ks_statistic(vacuum, Quadrature::Phi, 111, n);
  const double d2 = ks_statistic(displaced, Quadrature::V, 222, n);
  const double d3 = ks_statistic(cat, Quadrature::Phi, 333, n);
  detail = fmt("KS %.5f / %.5f", d1, d2) + fmt(" / %.5f (limit %.5f)", d3, threshold);
  return d1 <= threshold && d2 <= threshold && d3 <= threshold;
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    bool (*run)(std::string&);
  };
  const Entry entries[] = {
      {"collapse-revival", check_collapse_revival},
      {"cat-decomposition", check_cat_decomposition},
      {"variance-agreement", check_variance_agreement},
      {"ensemble-noise", check_ensemble_noise},
      {"headline-rates", check_headline_rates},
      {"security-boundary", check_security_boundary},
      {"end-to-end-pipeline", check_pipeline},
      {"sampler-fidelity", check_sampler_fidelity},
  };

  int failures = 0;
  int idx = 0;
  for (const Entry& e : entries) {
    ++idx;
    std::string detail;
    bool ok = false;
    try {
      ok = e.run(detail);
    } catch (const std::exception& ex) {
      detail = std::string("exception: ") + ex.what();
    }
    if (!ok) ++failures;
    std::printf("%s %d %-20s %s\n", ok ? "PASS" : "FAIL", idx, e.name, detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
