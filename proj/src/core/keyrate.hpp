#pragma once

#include <cstdint>
#include <vector>

#include "core/fock.hpp"
#include "core/rng.hpp"

namespace sqkd {

struct NoiseEstimate {
  double value = 0.0;      // mean of (bob - alice)^2
  double std_error = 0.0;  // jackknife standard error of that mean
  std::size_t n = 0;
};

// Requires at least 1000 pairs, otherwise TooFewSamples.
NoiseEstimate empirical_noise(const std::vector<double>& alice, const std::vector<double>& bob);

// I = (1/2) log2(1 + signal/noise), both in the same (absolute) units.
double mutual_info_gaussian(double signal_variance, double noise_variance);

// Coherent-protocol rate (1/2) log2((V + chi)/(1 + V chi)) with V the total
// source variance in N0 units (encoding + vacuum) and chi = (1-eta)/eta.
double secure_rate_background(double v_total, double chi);

// Same rate assembled from the two signal-to-noise ratios
// 1+Sigma_B = (V+chi)/(1+chi), 1+Sigma_E = (V+1/chi)/(1+1/chi); agrees with
// secure_rate_background to within rounding.
double secure_rate_background_snr(double v_total, double chi);

// Information advantage with explicit transmission-time noises (absolute
// units): DeltaI = I_AB(chi, c_ab) - I_AE(chi, c_ae) where c_ab and c_ae are
// Bob's and Eve's storage/measurement noises referred to the channel input.
// Eve cannot beat the vacuum floor, so c_ae < N0 is rejected.
double secure_rate_scheme1(double v_mod, double chi, double c_ab, double c_ae);

struct SliceSummary {
  double predicted_ber = 0.0;
  bool disclosed = false;
  std::uint64_t leaked = 0;
};

struct ReconcileResult {
  std::vector<std::uint8_t> alice_bits;
  std::vector<std::uint8_t> bob_bits;  // equal to alice_bits on success
  std::uint64_t leaked_bits = 0;
  std::vector<SliceSummary> slices;
};

// Quantizes both sequences into n_slices binary slices through shared
// quantile thresholds and corrects Bob slice by slice. Slices run from fine
// to coarse; once a slice is settled Bob re-derives his next estimates from
// the posterior restricted to the bins that remain consistent, and slices
// whose predicted error rate is hopeless are disclosed outright. The rest go
// through a four-pass Cascade parity exchange. Every disclosed parity and
// bit counts toward leaked_bits. Residual mismatches raise
// ReconciliationFailure.
ReconcileResult slice_reconcile(const std::vector<double>& alice,
                                const std::vector<double>& bob, int n_slices, Rng& rng);

// Compresses the reconciled string with a seeded binary Toeplitz hash. The
// output length is
//   min(floor(rounds * delta_i), bits - leaked - ceil(rounds * i_ae)) - 64,
// i.e. the information advantage capped by the operational count of bits
// not touched by disclosure or Eve's bound, minus a safety margin. Returns
// an empty key when the advantage is nonpositive.
std::vector<std::uint8_t> privacy_amplify(const std::vector<std::uint8_t>& bits,
                                          std::uint64_t leaked_bits, std::uint64_t rounds,
                                          double delta_i, double i_ae, Rng& rng);

struct KeyRateReport {
  std::uint64_t rounds = 0;
  double chi = 0.0;
  double signal = 0.0;            // empirical variance of Alice's sifted values
  double noise_ab = 0.0;          // empirical input-referred pair noise
  double noise_ab_se = 0.0;
  double i_ab = 0.0;              // bits per round from the empirical pair
  double i_ae_bound = 0.0;        // no-cloning bound (Eve at the vacuum floor)
  double i_ae_empirical = -1.0;   // from recorded Eve outcomes; -1 when absent
  double delta_i = 0.0;           // i_ab - i_ae_bound
  bool secure = false;            // delta_i > 0 and chi < 1
  std::uint64_t reconciled_bits = 0;
  std::uint64_t leaked_bits = 0;
  std::uint64_t final_key_bits = 0;
};

// Parameter estimation on sifted, input-referred pairs. The security verdict
// always uses the bound for Eve, never her empirical trace.
KeyRateReport estimate_key_rate(const std::vector<double>& alice,
                                const std::vector<double>& bob,
                                const std::vector<double>& eve, double chi);

}  // namespace sqkd
