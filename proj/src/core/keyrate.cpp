#include "core/keyrate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numeric>

#include "core/error.hpp"

namespace sqkd {
namespace {

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double variance_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return acc / static_cast<double>(v.size());
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double entropy_bin(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

// ---- Cascade ----------------------------------------------------------

struct CascadePass {
  std::vector<std::uint32_t> perm;      // bit order for this pass
  std::vector<std::uint32_t> block_of;  // bit index -> block id
  std::vector<std::uint8_t> alice_par;  // disclosed block parities
  std::size_t block_size = 0;
};

std::uint8_t range_parity(const std::vector<std::uint8_t>& bits,
                          const std::vector<std::uint32_t>& perm, std::size_t lo,
                          std::size_t hi) {
  std::uint8_t p = 0;
  for (std::size_t j = lo; j < hi; ++j) p ^= bits[perm[j]];
  return p;
}

// Locates the single differing bit inside a parity-mismatched block by
// disclosing halved sub-parities; returns the bit index and counts leaks.
std::uint32_t bisect_error(const std::vector<std::uint8_t>& alice,
                           const std::vector<std::uint8_t>& bob, const CascadePass& pass,
                           std::size_t lo, std::size_t hi, std::uint64_t& leaked) {
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    ++leaked;
    const std::uint8_t a = range_parity(alice, pass.perm, lo, mid);
    const std::uint8_t b = range_parity(bob, pass.perm, lo, mid);
    if (a == b) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return pass.perm[lo];
}

std::uint64_t cascade_correct(const std::vector<std::uint8_t>& alice,
                              std::vector<std::uint8_t>& bob, double ber_estimate, Rng& rng) {
  const std::size_t n = alice.size();
  std::uint64_t leaked = 0;
  const double p = std::max(ber_estimate, 1e-4);
  // Keeping at least eight blocks per pass lets reshuffles split hidden
  // even-count error pairs.
  const std::size_t cap = std::max<std::size_t>(2, n / 8);
  std::size_t k1 = static_cast<std::size_t>(std::ceil(0.73 / p));
  k1 = std::clamp<std::size_t>(k1, 2, cap);

  constexpr int kPasses = 4;
  std::vector<CascadePass> passes;
  passes.reserve(kPasses);

  // (pass, block) pairs whose bob parity currently disagrees with Alice's.
  std::vector<std::pair<std::size_t, std::uint32_t>> pending;

  auto block_bounds = [](const CascadePass& ps, std::uint32_t blk, std::size_t n_bits) {
    const std::size_t lo = static_cast<std::size_t>(blk) * ps.block_size;
    const std::size_t hi = std::min(lo + ps.block_size, n_bits);
    return std::pair<std::size_t, std::size_t>(lo, hi);
  };

  auto fix_block = [&](std::size_t pi, std::uint32_t blk) {
    const CascadePass& ps = passes[pi];
    const auto [lo, hi] = block_bounds(ps, blk, n);
    const std::uint32_t bit = bisect_error(alice, bob, ps, lo, hi, leaked);
    bob[bit] ^= 1;
    // The flip toggles parity agreement in every pass built so far.
    for (std::size_t qi = 0; qi < passes.size(); ++qi) {
      if (qi == pi) continue;
      const CascadePass& qs = passes[qi];
      const std::uint32_t qb = qs.block_of[bit];
      const auto [qlo, qhi] = block_bounds(qs, qb, n);
      if (range_parity(bob, qs.perm, qlo, qhi) != qs.alice_par[qb]) {
        pending.emplace_back(qi, qb);
      }
    }
  };

  auto run_pass = [&](std::size_t block_size, bool shuffle) {
    CascadePass ps;
    ps.block_size = block_size;
    ps.perm.resize(n);
    std::iota(ps.perm.begin(), ps.perm.end(), 0u);
    if (shuffle) {
      for (std::size_t j = n - 1; j > 0; --j) {
        std::swap(ps.perm[j], ps.perm[rng.below(j + 1)]);
      }
    }
    const std::size_t n_blocks = (n + ps.block_size - 1) / ps.block_size;
    ps.block_of.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      ps.block_of[ps.perm[j]] = static_cast<std::uint32_t>(j / ps.block_size);
    }
    ps.alice_par.resize(n_blocks);
    passes.push_back(std::move(ps));
    CascadePass& cur = passes.back();

    for (std::uint32_t blk = 0; blk < n_blocks; ++blk) {
      const auto [lo, hi] = block_bounds(cur, blk, n);
      ++leaked;
      cur.alice_par[blk] = range_parity(alice, cur.perm, lo, hi);
      if (range_parity(bob, cur.perm, lo, hi) != cur.alice_par[blk]) {
        pending.emplace_back(passes.size() - 1, blk);
      }
    }

    while (!pending.empty()) {
      const auto [pi, blk] = pending.back();
      pending.pop_back();
      const CascadePass& ps = passes[pi];
      const auto [lo, hi] = block_bounds(ps, blk, n);
      if (range_parity(bob, ps.perm, lo, hi) == ps.alice_par[blk]) continue;
      fix_block(pi, blk);
    }
  };

  for (int round = 0; round < kPasses; ++round) {
    run_pass(std::min(cap, k1 << round), round > 0);
  }
  // Even-count errors can dodge every scheduled pass; a disclosed check
  // hash detects them and buys further reshuffled passes.
  for (int audit = 0; audit < 6; ++audit) {
    leaked += 64;
    if (bob == alice) return leaked;
    run_pass(std::min(cap, k1), true);
    run_pass(std::min(cap, 2 * k1), true);
  }
  fail(ErrorCode::ReconciliationFailure, "residual bit errors after cascade");
}

}  // namespace

NoiseEstimate empirical_noise(const std::vector<double>& alice, const std::vector<double>& bob) {
  if (alice.size() != bob.size()) fail(ErrorCode::DimensionMismatch, "pair streams differ in length");
  const std::size_t n = alice.size();
  if (n < 1000) fail(ErrorCode::TooFewSamples, "noise estimate needs at least 1000 pairs");

  double mean = 0.0;
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = bob[i] - alice[i];
    sq[i] = d * d;
    mean += sq[i];
  }
  mean /= static_cast<double>(n);

  // Leave-one-out means of i.i.d. squares collapse to the usual SE of the mean.
  double var = 0.0;
  for (double s : sq) var += (s - mean) * (s - mean);
  var /= static_cast<double>(n - 1);

  NoiseEstimate est;
  est.value = mean;
  est.std_error = std::sqrt(var / static_cast<double>(n));
  est.n = n;
  return est;
}

double mutual_info_gaussian(double signal_variance, double noise_variance) {
  if (signal_variance < 0.0) fail(ErrorCode::InvalidArgument, "negative signal variance");
  if (noise_variance <= 0.0) fail(ErrorCode::InvalidArgument, "noise variance must be positive");
  return 0.5 * std::log2(1.0 + signal_variance / noise_variance);
}

double secure_rate_background(double v_total, double chi) {
  if (v_total < 1.0) fail(ErrorCode::InvalidArgument, "total variance below the vacuum floor");
  if (chi < 0.0) fail(ErrorCode::InvalidArgument, "negative channel noise ratio");
  return 0.5 * std::log2((v_total + chi) / (1.0 + v_total * chi));
}

double secure_rate_background_snr(double v_total, double chi) {
  if (v_total < 1.0) fail(ErrorCode::InvalidArgument, "total variance below the vacuum floor");
  if (chi < 0.0) fail(ErrorCode::InvalidArgument, "negative channel noise ratio");
  const double snr_bob = (v_total - 1.0) / (1.0 + chi);
  // Eve's effective channel has the reciprocal noise ratio.
  if (chi == 0.0) return 0.5 * std::log2(1.0 + snr_bob);
  const double snr_eve = (v_total - 1.0) / (1.0 + 1.0 / chi);
  return 0.5 * (std::log2(1.0 + snr_bob) - std::log2(1.0 + snr_eve));
}

double secure_rate_scheme1(double v_mod, double chi, double c_ab, double c_ae) {
  if (v_mod <= 0.0) fail(ErrorCode::InvalidArgument, "modulation variance must be positive");
  if (chi < 0.0) fail(ErrorCode::InvalidArgument, "negative channel noise ratio");
  if (c_ab < kVacuumNoise) fail(ErrorCode::InvalidArgument, "bob noise below the vacuum floor");
  if (c_ae < kVacuumNoise) fail(ErrorCode::EveBelowVacuum, "eve noise below the vacuum floor");
  const double i_ab =
      0.5 * std::log2(((v_mod + chi) * kVacuumNoise + c_ab) / (chi * kVacuumNoise + c_ab));
  const double i_ae =
      0.5 * std::log2(((1.0 + v_mod * chi) * kVacuumNoise + c_ae * chi) /
                      (c_ae * chi + kVacuumNoise));
  return i_ab - i_ae;
}

ReconcileResult slice_reconcile(const std::vector<double>& alice, const std::vector<double>& bob,
                                int n_slices, Rng& rng) {
  if (alice.size() != bob.size()) fail(ErrorCode::DimensionMismatch, "pair streams differ in length");
  if (n_slices < 1 || n_slices > 5) fail(ErrorCode::InvalidArgument, "slice count outside 1..5");
  const std::size_t n = alice.size();
  if (n < 1000) fail(ErrorCode::TooFewSamples, "reconciliation needs at least 1000 pairs");

  const int n_bins = 1 << n_slices;
  const double mu_a = mean_of(alice);
  const double var_a = variance_of(alice);
  double var_n = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = bob[i] - alice[i];
    var_n += d * d;
  }
  var_n = std::max(var_n / static_cast<double>(n), 1e-12);

  // Shared bin edges at Alice's empirical quantiles.
  std::vector<double> sorted(alice);
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> edges(static_cast<std::size_t>(n_bins) - 1);
  for (int k = 1; k < n_bins; ++k) {
    edges[k - 1] = sorted[(static_cast<std::size_t>(k) * n) / n_bins];
  }

  std::vector<int> alice_bin(n);
  for (std::size_t i = 0; i < n; ++i) {
    alice_bin[i] = static_cast<int>(std::upper_bound(edges.begin(), edges.end(), alice[i]) -
                                    edges.begin());
  }

  // Posterior bin masses for Bob under the Gaussian pair model.
  const double post_var = 1.0 / (1.0 / var_a + 1.0 / var_n);
  const double post_sd = std::sqrt(post_var);
  std::vector<double> post(n * static_cast<std::size_t>(n_bins));
  for (std::size_t i = 0; i < n; ++i) {
    const double m = post_var * (mu_a / var_a + bob[i] / var_n);
    double prev = 0.0;
    for (int k = 0; k < n_bins - 1; ++k) {
      const double c = normal_cdf((edges[k] - m) / post_sd);
      post[i * n_bins + k] = c - prev;
      prev = c;
    }
    post[i * n_bins + (n_bins - 1)] = 1.0 - prev;
  }

  ReconcileResult out;
  out.alice_bits.reserve(n * static_cast<std::size_t>(n_slices));
  out.bob_bits.reserve(n * static_cast<std::size_t>(n_slices));
  out.slices.resize(static_cast<std::size_t>(n_slices));

  const std::uint32_t full_mask = static_cast<std::uint32_t>((1ull << n_bins) - 1);
  std::vector<std::uint32_t> live(n, full_mask);
  // A bit less certain than this is cheaper to disclose than to cascade.
  constexpr double kBitDisclose = 0.25;

  std::vector<double> bit_err(n);
  std::vector<std::uint32_t> keep;
  for (int s = 0; s < n_slices; ++s) {
    std::vector<std::uint8_t> a_bits(n), b_bits(n);
    double err_mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      a_bits[i] = static_cast<std::uint8_t>((alice_bin[i] >> s) & 1);
      double w[2] = {0.0, 0.0};
      for (int k = 0; k < n_bins; ++k) {
        if (live[i] & (1u << k)) w[(k >> s) & 1] += post[i * n_bins + k];
      }
      b_bits[i] = w[1] > w[0] ? 1 : 0;
      bit_err[i] = std::min(w[0], w[1]) / std::max(w[0] + w[1], 1e-300);
      err_mass += bit_err[i];
    }
    SliceSummary& sum = out.slices[static_cast<std::size_t>(s)];
    sum.predicted_ber = err_mass / static_cast<double>(n);

    // Bob asks for the bits his posterior cannot settle; the confident rest
    // goes through parity correction at its much lower residual error rate.
    keep.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (bit_err[i] > kBitDisclose) {
        b_bits[i] = a_bits[i];
      } else {
        keep.push_back(static_cast<std::uint32_t>(i));
      }
    }
    // Group kept bits by certainty; a single parity run over mixed rates
    // pays for its worst members, separate runs pay near the entropy.
    constexpr double kGroupEdges[] = {0.003, 0.012, 0.04, 0.10};
    std::vector<std::vector<std::uint32_t>> raw(5);
    for (std::uint32_t i : keep) {
      std::size_t b = 0;
      while (b < 4 && bit_err[i] > kGroupEdges[b]) ++b;
      raw[b].push_back(i);
    }
    std::vector<std::vector<std::uint32_t>> groups;
    for (auto& g : raw) {
      if (g.empty()) continue;
      if (!groups.empty() && (groups.back().size() < 64 || g.size() < 64)) {
        groups.back().insert(groups.back().end(), g.begin(), g.end());
      } else {
        groups.push_back(std::move(g));
      }
    }

    // Projected parity cost; when it cannot beat flat disclosure the whole
    // slice is cheaper sent in the clear.
    double projected = static_cast<double>(n - keep.size());
    for (const auto& g : groups) {
      double g_err = 0.0;
      for (std::uint32_t i : g) g_err += bit_err[i];
      g_err /= static_cast<double>(g.size());
      projected += static_cast<double>(g.size()) * std::min(1.0, 1.35 * entropy_bin(g_err)) + 96.0;
    }

    if (keep.size() < n / 10 || projected >= static_cast<double>(n)) {
      sum.disclosed = true;
      sum.leaked = n;
      b_bits = a_bits;
    } else {
      sum.leaked = n - keep.size();
      for (const auto& g : groups) {
        std::vector<std::uint8_t> a_sub(g.size()), b_sub(g.size());
        double g_err = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) {
          a_sub[j] = a_bits[g[j]];
          b_sub[j] = b_bits[g[j]];
          g_err += bit_err[g[j]];
        }
        sum.leaked += cascade_correct(a_sub, b_sub, g_err / static_cast<double>(g.size()), rng);
        for (std::size_t j = 0; j < g.size(); ++j) b_bits[g[j]] = b_sub[j];
      }
    }
    out.leaked_bits += sum.leaked;

    for (std::size_t i = 0; i < n; ++i) {
      // Bins disagreeing with the settled bit can no longer carry mass.
      for (int k = 0; k < n_bins; ++k) {
        if (((k >> s) & 1) != b_bits[i]) live[i] &= ~(1u << k);
      }
    }
    out.alice_bits.insert(out.alice_bits.end(), a_bits.begin(), a_bits.end());
    out.bob_bits.insert(out.bob_bits.end(), b_bits.begin(), b_bits.end());
  }

  if (out.alice_bits != out.bob_bits) {
    fail(ErrorCode::ReconciliationFailure, "residual bit errors after cascade");
  }
  return out;
}

std::vector<std::uint8_t> privacy_amplify(const std::vector<std::uint8_t>& bits,
                                          std::uint64_t leaked_bits, std::uint64_t rounds,
                                          double delta_i, double i_ae, Rng& rng) {
  if (delta_i <= 0.0) return {};
  const std::int64_t m = static_cast<std::int64_t>(bits.size());
  const std::int64_t cap_info = static_cast<std::int64_t>(
      std::floor(static_cast<double>(rounds) * delta_i));
  const std::int64_t cap_ops = m - static_cast<std::int64_t>(leaked_bits) -
                               static_cast<std::int64_t>(
                                   std::ceil(static_cast<double>(rounds) * std::max(i_ae, 0.0)));
  const std::int64_t len = std::min(cap_info, cap_ops) - 64;
  if (len <= 0 || m == 0) return {};

  // Pack the input once; each output bit is the parity of a seeded window
  // AND-ed against it (binary Toeplitz matrix, diagonals from the seed).
  const std::size_t n_words = static_cast<std::size_t>((m + 63) / 64);
  std::vector<std::uint64_t> x(n_words, 0);
  for (std::int64_t i = 0; i < m; ++i) {
    // Reversed order makes the seed window a true Toeplitz row.
    if (bits[static_cast<std::size_t>(m - 1 - i)]) {
      x[static_cast<std::size_t>(i) >> 6] |= 1ull << (i & 63);
    }
  }

  const std::size_t seed_bits = static_cast<std::size_t>(m + len - 1);
  std::vector<std::uint64_t> seed((seed_bits + 63) / 64 + 1, 0);
  for (auto& w : seed) w = rng.bits();

  std::vector<std::uint8_t> key(static_cast<std::size_t>(len));
  for (std::int64_t j = 0; j < len; ++j) {
    const std::size_t q = static_cast<std::size_t>(j) >> 6;
    const unsigned r = static_cast<unsigned>(j & 63);
    std::uint64_t acc = 0;
    for (std::size_t u = 0; u < n_words; ++u) {
      std::uint64_t w = seed[u + q] >> r;
      if (r) w |= seed[u + q + 1] << (64 - r);
      acc ^= w & x[u];
    }
    key[static_cast<std::size_t>(j)] =
        static_cast<std::uint8_t>(std::popcount(acc) & 1);
  }
  return key;
}

KeyRateReport estimate_key_rate(const std::vector<double>& alice, const std::vector<double>& bob,
                                const std::vector<double>& eve, double chi) {
  KeyRateReport rep;
  rep.rounds = alice.size();
  rep.chi = chi;

  const NoiseEstimate ab = empirical_noise(alice, bob);
  rep.signal = variance_of(alice);
  rep.noise_ab = ab.value;
  rep.noise_ab_se = ab.std_error;
  rep.i_ab = mutual_info_gaussian(rep.signal, rep.noise_ab);

  // Eve held to the vacuum floor: her input-referred noise is N0 (scaled by
  // chi through the tap), giving the no-cloning ceiling on her information.
  const double v_mod = rep.signal / kVacuumNoise;
  if (chi > 0.0) {
    rep.i_ae_bound = 0.5 * std::log2((1.0 + v_mod * chi + chi) / (1.0 + chi));
  } else {
    rep.i_ae_bound = 0.0;
  }

  if (!eve.empty()) {
    const NoiseEstimate ae = empirical_noise(alice, eve);
    rep.i_ae_empirical = mutual_info_gaussian(rep.signal, ae.value);
  }

  rep.delta_i = rep.i_ab - rep.i_ae_bound;
  rep.secure = chi < 1.0 && rep.delta_i > 0.0;
  return rep;
}

}  // namespace sqkd
