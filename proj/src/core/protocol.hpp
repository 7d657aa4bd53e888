#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "core/device.hpp"
#include "core/fock.hpp"
#include "core/rng.hpp"

namespace sqkd {

// Gaussian modulation of the coherent alphabet. Variance is quoted in units
// of the vacuum noise N0 = 1/2, so each label quadrature is drawn from
// N(center, v_mod * N0).
struct SourceConfig {
  double v_mod = 1.0;
  double phi_center = 0.0;
  double v_center = 0.0;
};

struct ChannelConfig {
  double eta = 1.0;           // beamsplitter transmittivity; Eve holds the tap
  double excess_noise = 0.0;  // extra label jitter, in N0 units per quadrature
};

struct MeasurementScheme {
  enum class Kind { ArbitraryTime, TimeStamped };
  Kind kind = Kind::ArbitraryTime;
  // Measurement instants in units of pi/nu; used by TimeStamped only.
  std::vector<double> times = {0.0, 0.5, 1.0, 1.5, 2.0};
  bool fold = false;  // record |outcome| (TimeStamped default)
  double time_jitter = 0.0;

  static MeasurementScheme arbitrary_time() { return {}; }
  static MeasurementScheme time_stamped() {
    MeasurementScheme s;
    s.kind = Kind::TimeStamped;
    s.fold = true;
    return s;
  }
};

struct TrialRecord {
  std::uint64_t index = 0;
  double phi_a = 0.0;
  double v_a = 0.0;
  double t_meas = 0.0;
  Quadrature basis = Quadrature::Phi;
  double outcome = 0.0;
  std::optional<double> eve_outcome;
};

struct RunOptions {
  std::uint64_t seed = 0;
  std::uint64_t rounds = 0;
  bool full_numeric = false;  // route every round through the truncated basis
  int grid_points = 4096;
  int dim = 0;      // 0 = auto per round
  int threads = 0;  // 0 = hardware concurrency
};

std::pair<double, double> alice_sample(const SourceConfig& src, Rng& rng);

struct SplitAmplitudes {
  Complex bob;
  Complex eve;
};

// Beamsplitter: bob = sqrt(eta) alpha, eve = sqrt(1-eta) alpha. Energy is
// conserved exactly: |bob|^2 + |eve|^2 = |alpha|^2.
SplitAmplitudes channel_transmit(Complex alpha, double eta);

// One protocol round with its own deterministic stream derived from
// (seed, index); records are identical whatever the thread layout.
TrialRecord run_round(std::uint64_t index, const SourceConfig& src, const ChannelConfig& ch,
                      const MeasurementScheme& scheme, const EffectiveParams& eff,
                      const RunOptions& opts);

std::vector<TrialRecord> run_protocol(const SourceConfig& src, const ChannelConfig& ch,
                                      const MeasurementScheme& scheme,
                                      const EffectiveParams& eff, const RunOptions& opts);

// Basis announcement and pairing. Every round is kept: Alice's sifted value
// is the label component matching Bob's basis. When the scheme folds
// outcomes, Alice's values are folded here so both sides agree on sign
// conventions; Bob and Eve outcomes are rescaled to input reference by
// 1/sqrt(eta) and 1/sqrt(1-eta) on request of the analysis layer.
struct SiftedPairs {
  std::vector<double> alice;
  std::vector<double> bob;
  std::vector<double> eve;  // empty when the channel is lossless
};

SiftedPairs sift(const std::vector<TrialRecord>& records, const MeasurementScheme& scheme,
                 const ChannelConfig& ch);

}  // namespace sqkd
