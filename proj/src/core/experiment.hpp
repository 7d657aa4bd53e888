#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/keyrate.hpp"
#include "core/protocol.hpp"

namespace sqkd {

inline constexpr const char* kVersion = "1.0.0";

std::uint64_t fnv1a(const std::string& data);

// First line of every emitted CSV; identical inputs yield identical bytes.
struct Provenance {
  std::uint64_t config_hash = 0;
  std::optional<std::uint64_t> seed;
};

std::string provenance_line(const Provenance& prov);

// ---- Full protocol pipeline -------------------------------------------

struct ProtocolArtifacts {
  std::vector<TrialRecord> trials;
  SiftedPairs pairs;
  KeyRateReport report;
  std::vector<SliceSummary> slices;
  std::vector<std::uint8_t> key;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
};

// run -> sift -> estimate; reconciliation and hashing only run when the
// estimate is secure, otherwise the key stays empty.
ProtocolArtifacts run_pipeline(const Config& cfg, std::uint64_t seed,
                               const std::string& config_text);

// Header: index, phi_A, v_A, t_meas, basis, outcome, eve_outcome.
// Numbers are printed with %.17g so reruns are byte-identical.
void write_trials_csv(const std::string& path, const ProtocolArtifacts& art);

void write_report_json(const std::string& path, const Config& cfg,
                       const ProtocolArtifacts& art);

// ---- Figures ------------------------------------------------------------

// Dataset emitters backing the standard plots:
//   variance-evolution      quadrature variances at ratio 5, labels (0.3, 0.3)
//   ensemble-noise          ensemble-averaged noise at ratios 5 and 6
//   cat-distribution        quarter-period densities at ratio 100, labels (4, 4)
//   cat-squeezing-contour   even-ratio superposition variance over the label plane
const std::vector<std::string>& figure_ids();

// Writes <id>.csv to out_dir.  ensemble-noise writes <id>-ratio5.csv and
// <id>-ratio6.csv; the contour adds <id>-segments.csv with the level sets.
void emit_figure(const Config& cfg, const Provenance& prov, const std::string& id,
                 const std::string& out_dir);

// ---- Channel sweep ------------------------------------------------------

struct SweepRow {
  double eta = 0.0;
  double chi = 0.0;
  double i_ab = 0.0;
  double i_ae_bound = 0.0;
  double delta_i = 0.0;
  bool secure = false;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double eta_zero_rate = 0.0;  // net-rate formula crossing zero
  double eta_zero_info = 0.0;  // i_ab - i_ae_bound crossing zero
};

SweepResult sweep_eta(double v_mod, int n_points);
void write_sweep_csv(const std::string& path, const SweepResult& sweep,
                     const Provenance& prov);

// ---- Contour extraction -------------------------------------------------

struct ContourSegment {
  double level = 0.0;
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
};

// Marching-squares iso-lines of f over a regular grid.
std::vector<ContourSegment> contour_segments(const std::vector<double>& xs,
                                             const std::vector<double>& ys,
                                             const std::vector<double>& f,
                                             const std::vector<double>& levels);

// ---- Self checks --------------------------------------------------------

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Internal consistency suite: closed forms against the truncated basis,
// sampler statistics, rate identities, reconciliation round trip.
std::vector<CheckResult> run_validation();

}  // namespace sqkd
