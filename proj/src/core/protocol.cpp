#include "core/protocol.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "core/homodyne.hpp"

namespace sqkd {

namespace {

// Relative tolerance when matching a measurement time against the revival
// grid; protocol times are exact multiples so this is generous.
constexpr double kTimeEps = 1e-9;

bool near(double a, double b, double scale) { return std::abs(a - b) <= kTimeEps * scale; }

double label_component(Complex alpha, Quadrature basis) {
  return basis == Quadrature::Phi ? std::sqrt(2.0) * alpha.real()
                                  : std::sqrt(2.0) * alpha.imag();
}

// Coherent relabelling at exact revival times. Returns the multiplier of the
// incoming label, or nothing when the instant is not a plain revival.
std::optional<double> revival_sign(double t, double omega_eff, double nu) {
  const double half = M_PI / nu;
  const double ratio = omega_eff / nu;
  const bool integer_ratio = near(ratio, std::round(ratio), std::max(1.0, ratio));
  if (!integer_ratio) return std::nullopt;
  if (near(t, 0.0, half) || near(t, 2.0 * half, half)) return 1.0;
  if (near(t, half, half)) {
    const bool even = std::llround(ratio) % 2 == 0;
    return even ? -1.0 : 1.0;
  }
  return std::nullopt;
}

}  // namespace

std::pair<double, double> alice_sample(const SourceConfig& src, Rng& rng) {
  const double sd = std::sqrt(src.v_mod * kVacuumNoise);
  return {rng.gaussian(src.phi_center, sd), rng.gaussian(src.v_center, sd)};
}

SplitAmplitudes channel_transmit(Complex alpha, double eta) {
  if (eta <= 0.0 || eta > 1.0) {
    fail(ErrorCode::InvalidArgument, "channel_transmit: eta must lie in (0, 1]");
  }
  return {std::sqrt(eta) * alpha, std::sqrt(1.0 - eta) * alpha};
}

TrialRecord run_round(std::uint64_t index, const SourceConfig& src, const ChannelConfig& ch,
                      const MeasurementScheme& scheme, const EffectiveParams& eff,
                      const RunOptions& opts) {
  Rng rng = Rng::for_index(opts.seed, index);
  TrialRecord rec;
  rec.index = index;

  // Draw order is part of the record contract; changing it changes streams.
  std::tie(rec.phi_a, rec.v_a) = alice_sample(src, rng);
  Complex alpha = label_to_alpha(rec.phi_a, rec.v_a);
  if (ch.excess_noise > 0.0) {
    const double sd = std::sqrt(ch.excess_noise * kVacuumNoise);
    alpha += label_to_alpha(rng.gaussian(0.0, sd), rng.gaussian(0.0, sd));
  }

  const double half = M_PI / eff.nu;
  if (scheme.kind == MeasurementScheme::Kind::ArbitraryTime) {
    rec.t_meas = rng.uniform(0.0, 2.0 * half);
  } else {
    const double pick = scheme.times[rng.below(scheme.times.size())];
    rec.t_meas = pick * half;
    if (scheme.time_jitter > 0.0) rec.t_meas += rng.gaussian(0.0, scheme.time_jitter);
  }
  rec.basis = rng.coin() ? Quadrature::V : Quadrature::Phi;

  const SplitAmplitudes split = channel_transmit(alpha, ch.eta);

  // Coherent relabelling applies only at exact revivals of the stamped grid;
  // arbitrary or jittered times always run through the truncated basis.
  const bool fast_path_allowed = !opts.full_numeric &&
                                 scheme.kind == MeasurementScheme::Kind::TimeStamped &&
                                 scheme.time_jitter == 0.0;
  const std::optional<double> sign =
      fast_path_allowed ? revival_sign(rec.t_meas, eff.omega_eff, eff.nu) : std::nullopt;
  if (sign.has_value()) {
    // At exact revivals Bob's state is coherent with a known label, so the
    // outcome is a Gaussian draw around its component.
    const double mean = label_component(*sign * split.bob, rec.basis);
    rec.outcome = rng.gaussian(mean, std::sqrt(kVacuumNoise));
  } else {
    const int dim = opts.dim > 0 ? opts.dim : recommended_dim(split.bob);
    FockVector state = kerr_evolve(coherent_state(split.bob, dim), eff.omega_eff, eff.nu,
                                   rec.t_meas);
    rec.outcome = HomodyneSampler(state, rec.basis, opts.grid_points).sample(rng);
  }
  if (scheme.fold) rec.outcome = std::abs(rec.outcome);

  if (ch.eta < 1.0) {
    // Eve stores her tap and measures in the announced basis at a revival
    // equivalent, so her statistics sit at the vacuum noise floor.
    double ev = rng.gaussian(label_component(split.eve, rec.basis), std::sqrt(kVacuumNoise));
    if (scheme.fold) ev = std::abs(ev);
    rec.eve_outcome = ev;
  }
  return rec;
}

std::vector<TrialRecord> run_protocol(const SourceConfig& src, const ChannelConfig& ch,
                                      const MeasurementScheme& scheme,
                                      const EffectiveParams& eff, const RunOptions& opts) {
  if (opts.rounds == 0) fail(ErrorCode::InvalidArgument, "run_protocol: zero rounds");
  std::vector<TrialRecord> records(opts.rounds);
  unsigned n_threads = opts.threads > 0 ? static_cast<unsigned>(opts.threads)
                                        : std::thread::hardware_concurrency();
  if (n_threads == 0) n_threads = 1;
  n_threads = std::min<std::uint64_t>(n_threads, opts.rounds);

  std::atomic<std::uint64_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::uint64_t chunk = 256;
      const std::uint64_t begin = next.fetch_add(chunk);
      if (begin >= opts.rounds) return;
      const std::uint64_t end = std::min(begin + chunk, opts.rounds);
      for (std::uint64_t i = begin; i < end; ++i) {
        records[i] = run_round(i, src, ch, scheme, eff, opts);
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();
  return records;
}

SiftedPairs sift(const std::vector<TrialRecord>& records, const MeasurementScheme& scheme,
                 const ChannelConfig& ch) {
  SiftedPairs out;
  out.alice.reserve(records.size());
  out.bob.reserve(records.size());
  const double bob_scale = 1.0 / std::sqrt(ch.eta);
  const double eve_scale = ch.eta < 1.0 ? 1.0 / std::sqrt(1.0 - ch.eta) : 0.0;
  for (const TrialRecord& r : records) {
    double a = r.basis == Quadrature::Phi ? r.phi_a : r.v_a;
    if (scheme.fold) a = std::abs(a);
    out.alice.push_back(a);
    out.bob.push_back(r.outcome * bob_scale);
    if (r.eve_outcome.has_value()) out.eve.push_back(*r.eve_outcome * eve_scale);
  }
  return out;
}

}  // namespace sqkd
