#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>
#include <vector>

#include "core/analytic.hpp"
#include "core/protocol.hpp"

using namespace sqkd;

namespace {

EffectiveParams effective(double ratio, double nu) {
  EffectiveParams eff;
  eff.nu = nu;
  eff.omega_eff = ratio * nu;
  eff.omega = eff.omega_eff + nu;
  eff.mu = 0.0;  // preparation drive plays no part in the round loop
  return eff;
}

MeasurementScheme fixed_time_scheme(double time_in_half_periods, bool fold) {
  MeasurementScheme s = MeasurementScheme::time_stamped();
  s.times = {time_in_half_periods};
  s.fold = fold;
  return s;
}

struct Stats {
  double mean = 0.0;
  double var = 0.0;
  std::size_t n = 0;
};

Stats stats_of(const std::vector<double>& xs) {
  Stats s;
  s.n = xs.size();
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(s.n);
  for (double x : xs) s.var += (x - s.mean) * (x - s.mean);
  s.var /= static_cast<double>(s.n - 1);
  return s;
}

}  // namespace

TEST_CASE("alice label sampling") {
  SourceConfig src;
  src.v_mod = 2.0;
  src.phi_center = 4.0;
  src.v_center = -1.0;
  Rng rng(2901);
  const int n = 40000;
  std::vector<double> phis(n), vs(n);
  for (int i = 0; i < n; ++i) std::tie(phis[i], vs[i]) = alice_sample(src, rng);

  const Stats sp = stats_of(phis), sv = stats_of(vs);
  CHECK(sp.mean == doctest::Approx(4.0).epsilon(0.01));
  CHECK(sv.mean == doctest::Approx(-1.0).epsilon(0.01));
  CHECK(sp.var == doctest::Approx(1.0).epsilon(0.03));
  CHECK(sv.var == doctest::Approx(1.0).epsilon(0.03));

  double cov = 0.0;
  for (int i = 0; i < n; ++i) cov += (phis[i] - sp.mean) * (vs[i] - sv.mean);
  cov /= n;
  CHECK(std::abs(cov / std::sqrt(sp.var * sv.var)) < 4.0 / std::sqrt(n));
}

TEST_CASE("beamsplitter keeps energy and scales amplitudes") {
  Rng rng(3331);
  for (int k = 0; k < 50; ++k) {
    const Complex alpha(rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0));
    const double eta = rng.uniform(0.05, 1.0);
    const SplitAmplitudes s = channel_transmit(alpha, eta);
    CHECK(std::norm(s.bob) + std::norm(s.eve) ==
          doctest::Approx(std::norm(alpha)).epsilon(1e-14));
    CHECK(std::abs(s.bob - std::sqrt(eta) * alpha) < 1e-14);
    CHECK(std::abs(s.eve - std::sqrt(1.0 - eta) * alpha) < 1e-14);
  }
  const SplitAmplitudes lossless = channel_transmit(Complex(1.0, -2.0), 1.0);
  CHECK(lossless.bob == Complex(1.0, -2.0));
  CHECK(std::abs(lossless.eve) == 0.0);
  CHECK_THROWS_AS(channel_transmit(Complex(1.0, 0.0), 0.0), Error);
  CHECK_THROWS_AS(channel_transmit(Complex(1.0, 0.0), 1.5), Error);
}

TEST_CASE("record streams replay deterministically") {
  SourceConfig src;
  ChannelConfig ch;
  ch.eta = 0.8;
  const MeasurementScheme scheme = MeasurementScheme::arbitrary_time();
  const EffectiveParams eff = effective(30.0, 1.0);
  RunOptions opts;
  opts.seed = 20240229;
  opts.rounds = 400;
  opts.grid_points = 1024;

  const std::vector<TrialRecord> a = run_protocol(src, ch, scheme, eff, opts);
  const std::vector<TrialRecord> b = run_protocol(src, ch, scheme, eff, opts);
  RunOptions two = opts;
  two.threads = 2;
  const std::vector<TrialRecord> c = run_protocol(src, ch, scheme, eff, two);
  REQUIRE(a.size() == 400);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].outcome == b[i].outcome);
    CHECK(a[i].outcome == c[i].outcome);
    CHECK(a[i].phi_a == b[i].phi_a);
    CHECK(a[i].t_meas == b[i].t_meas);
    CHECK(a[i].eve_outcome.has_value());
    CHECK(*a[i].eve_outcome == *b[i].eve_outcome);
  }
  // Single rounds reproduce their slot in the batch.
  const TrialRecord solo = run_round(137, src, ch, scheme, eff, opts);
  CHECK(solo.outcome == a[137].outcome);
  CHECK(solo.phi_a == a[137].phi_a);
}

TEST_CASE("zero-time rounds leave only shot noise") {
  SourceConfig src;
  ChannelConfig ch;
  const EffectiveParams eff = effective(100.0, 100.0);
  const MeasurementScheme scheme = fixed_time_scheme(0.0, false);
  RunOptions opts;
  opts.seed = 11011;
  opts.rounds = 50000;

  const std::vector<TrialRecord> recs = run_protocol(src, ch, scheme, eff, opts);
  std::vector<double> residuals;
  residuals.reserve(recs.size());
  for (const TrialRecord& r : recs) {
    const double label = r.basis == Quadrature::Phi ? r.phi_a : r.v_a;
    residuals.push_back(r.outcome - label);
  }
  const Stats s = stats_of(residuals);
  CHECK(std::abs(s.mean) < 0.01);
  CHECK(s.var == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("input-referred noise follows the loss bookkeeping") {
  SourceConfig src;
  const EffectiveParams eff = effective(100.0, 100.0);
  const MeasurementScheme scheme = fixed_time_scheme(0.0, false);
  RunOptions opts;
  opts.seed = 5150;
  opts.rounds = 50000;

  SUBCASE("half transmittivity doubles both referred noises") {
    ChannelConfig ch;
    ch.eta = 0.5;
    const std::vector<TrialRecord> recs = run_protocol(src, ch, scheme, eff, opts);
    const SiftedPairs pairs = sift(recs, scheme, ch);
    REQUIRE(pairs.eve.size() == pairs.alice.size());
    std::vector<double> db(pairs.alice.size()), de(pairs.alice.size());
    for (std::size_t i = 0; i < pairs.alice.size(); ++i) {
      db[i] = pairs.bob[i] - pairs.alice[i];
      de[i] = pairs.eve[i] - pairs.alice[i];
    }
    CHECK(stats_of(db).var == doctest::Approx(1.0).epsilon(0.02));
    CHECK(stats_of(de).var == doctest::Approx(1.0).epsilon(0.02));
  }

  SUBCASE("excess noise rides on top of the vacuum") {
    ChannelConfig ch;
    ch.excess_noise = 0.5;
    const std::vector<TrialRecord> recs = run_protocol(src, ch, scheme, eff, opts);
    const SiftedPairs pairs = sift(recs, scheme, ch);
    CHECK(pairs.eve.empty());
    std::vector<double> db(pairs.alice.size());
    for (std::size_t i = 0; i < pairs.alice.size(); ++i) db[i] = pairs.bob[i] - pairs.alice[i];
    CHECK(stats_of(db).var == doctest::Approx(0.75).epsilon(0.02));
  }
}

TEST_CASE("arbitrary-time noise traces the ensemble curve") {
  SourceConfig src;
  ChannelConfig ch;
  const MeasurementScheme scheme = MeasurementScheme::arbitrary_time();
  RunOptions opts;
  opts.seed = 424201;
  opts.rounds = 100000;
  opts.grid_points = 2048;

  for (double ratio : {5.0, 6.0}) {
    CAPTURE(ratio);
    const double nu = 1.0;
    const EffectiveParams eff = effective(ratio, nu);
    const std::vector<TrialRecord> recs = run_protocol(src, ch, scheme, eff, opts);

    const int n_bins = 20;
    const double period = 2.0 * M_PI / nu;
    std::vector<double> sum(n_bins, 0.0), sum2(n_bins, 0.0);
    std::vector<int> count(n_bins, 0);
    for (const TrialRecord& r : recs) {
      int b = static_cast<int>(r.t_meas / period * n_bins);
      if (b == n_bins) b = n_bins - 1;
      const double label = r.basis == Quadrature::Phi ? r.phi_a : r.v_a;
      const double sq = (r.outcome - label) * (r.outcome - label);
      sum[b] += sq;
      sum2[b] += sq * sq;
      count[b] += 1;
    }

    double chi2 = 0.0;
    for (int b = 0; b < n_bins; ++b) {
      REQUIRE(count[b] > 1000);
      const double mean = sum[b] / count[b];
      const double se = std::sqrt((sum2[b] / count[b] - mean * mean) / count[b]);
      // Bin-averaged reference; the curve bends too much for a midpoint value.
      double ref = 0.0;
      const int n_ref = 33;
      for (int k = 0; k < n_ref; ++k) {
        const double t = period * (b + (k + 0.5) / n_ref) / n_bins;
        ref += ensemble_noise(eff.omega_eff, nu, t);
      }
      ref /= n_ref;
      const double z = (mean - ref) / se;
      chi2 += z * z;
    }
    // 20 bins: expectation 20, generous ceiling for a pinned seed.
    CHECK(chi2 < 45.0);
    CHECK(chi2 > 4.0);
  }
}

TEST_CASE("folded statistics at superposition times") {
  SourceConfig src;
  src.phi_center = 4.0;
  src.v_center = 4.0;
  ChannelConfig ch;
  const EffectiveParams eff = effective(100.0, 100.0);
  const MeasurementScheme scheme = MeasurementScheme::time_stamped();
  RunOptions opts;
  opts.seed = 77077;
  opts.rounds = 40000;
  opts.grid_points = 2048;

  const std::vector<TrialRecord> recs = run_protocol(src, ch, scheme, eff, opts);
  const double half = M_PI / eff.nu;
  std::vector<double> at_zero, at_cat;
  std::vector<double> noise;
  for (const TrialRecord& r : recs) {
    const double u = r.t_meas / half;
    if (std::abs(u - 0.0) < 1e-9) at_zero.push_back(r.outcome);
    if (std::abs(u - 0.5) < 1e-9 || std::abs(u - 1.5) < 1e-9) at_cat.push_back(r.outcome);
    const double a = std::abs(r.basis == Quadrature::Phi ? r.phi_a : r.v_a);
    noise.push_back((r.outcome - a) * (r.outcome - a));
  }
  REQUIRE(at_zero.size() > 5000);
  REQUIRE(at_cat.size() > 10000);

  const Stats zero = stats_of(at_zero), cat = stats_of(at_cat);
  // The superposition's folded outcomes look exactly like the unevolved
  // coherent outcomes once the centers sit far from the fold.
  CHECK(cat.mean == doctest::Approx(zero.mean).epsilon(0.01));
  CHECK(cat.var == doctest::Approx(zero.var).epsilon(0.05));
  CHECK(cat.mean == doctest::Approx(4.0).epsilon(0.01));
  CHECK(cat.var == doctest::Approx(1.0).epsilon(0.05));

  double mean_noise = 0.0;
  for (double x : noise) mean_noise += x;
  mean_noise /= static_cast<double>(noise.size());
  CHECK(mean_noise == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("sifting rules") {
  MeasurementScheme plain = MeasurementScheme::arbitrary_time();
  ChannelConfig ch;
  ch.eta = 0.25;

  std::vector<TrialRecord> recs(2);
  recs[0].phi_a = 1.5;
  recs[0].v_a = -2.5;
  recs[0].basis = Quadrature::Phi;
  recs[0].outcome = 0.6;
  recs[0].eve_outcome = 0.9;
  recs[1].phi_a = 0.25;
  recs[1].v_a = -1.25;
  recs[1].basis = Quadrature::V;
  recs[1].outcome = -0.8;
  recs[1].eve_outcome = -0.3;

  SUBCASE("basis picks the matching label and loss rescales") {
    const SiftedPairs p = sift(recs, plain, ch);
    REQUIRE(p.alice.size() == 2);
    CHECK(p.alice[0] == 1.5);
    CHECK(p.alice[1] == -1.25);
    CHECK(p.bob[0] == doctest::Approx(0.6 / 0.5).epsilon(1e-14));
    CHECK(p.eve[1] == doctest::Approx(-0.3 / std::sqrt(0.75)).epsilon(1e-14));
  }

  SUBCASE("folding applies to alice as well") {
    MeasurementScheme folded = MeasurementScheme::time_stamped();
    const SiftedPairs p = sift(recs, folded, ch);
    CHECK(p.alice[1] == 1.25);
  }

  SUBCASE("lossless channel leaves no eve trace") {
    ChannelConfig lossless;
    std::vector<TrialRecord> clean = recs;
    clean[0].eve_outcome.reset();
    clean[1].eve_outcome.reset();
    const SiftedPairs p = sift(clean, plain, lossless);
    CHECK(p.eve.empty());
    CHECK(p.bob[0] == 0.6);
  }
}
