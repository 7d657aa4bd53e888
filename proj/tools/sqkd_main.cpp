// Command-line front end; talks to the core exclusively through the C API.
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>

#include "CLI11.hpp"
#include "sqkd.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitValidation = 3;

int exit_code_for(sqkd_status st) {
  std::fprintf(stderr, "error: %s\n", sqkd_last_error());
  switch (st) {
    case SQKD_ERR_CONFIG:
    case SQKD_ERR_IO:
    case SQKD_ERR_INVALID_ARGUMENT:
    case SQKD_ERR_REGIME:
      return kExitConfig;
    case SQKD_ERR_VALIDATION:
      return kExitValidation;
    default:
      return kExitFailure;
  }
}

struct ExperimentHandle {
  sqkd_experiment* ptr = nullptr;
  ~ExperimentHandle() { sqkd_experiment_free(ptr); }
};

bool ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) std::fprintf(stderr, "error: cannot create %s: %s\n", dir.c_str(), ec.message().c_str());
  return !ec;
}

// Figure generation only needs effective frequencies; used when `figures`
// or `contour` runs without an explicit config.
constexpr const char* kDefaultConfigText =
    "[effective]\n"
    "omega = 10100\n"
    "nu = 100\n";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dc-SQUID coherent-state CV-QKD simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::string figure_id;
  std::uint64_t seed = 0;
  bool full_numeric = false;

  CLI::App* figures = app.add_subcommand("figures", "Write figure datasets as CSV");
  figures->add_option("--config", config_path, "INI configuration file (optional)");
  figures->add_option("--id", figure_id, "emit a single figure instead of all");
  figures->add_option("--out", out_dir, "output directory");

  CLI::App* run = app.add_subcommand("run-protocol", "Simulate rounds and distill a key");
  run->add_option("--config", config_path, "INI configuration file")->required();
  CLI::Option* seed_opt = run->add_option("--seed", seed, "override the run seed");
  run->add_option("--out", out_dir, "output directory");
  run->add_flag("--full-numeric", full_numeric,
                "route every round through the truncated-basis sampler");

  CLI::App* sweep = app.add_subcommand("sweep-eta", "Key rate against channel transmittivity");
  sweep->add_option("--config", config_path, "INI configuration file (sets v_mod)")->required();
  sweep->add_option("--out", out_dir, "output directory");

  CLI::App* contour = app.add_subcommand("contour", "Superposition variance over the label plane");
  contour->add_option("--config", config_path, "INI configuration file (optional)");
  contour->add_option("--out", out_dir, "output directory");

  CLI::App* validate = app.add_subcommand("validate", "Run the internal consistency suite");
  (void)validate;

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (validate->parsed()) {
    char* text = nullptr;
    int all_pass = 0;
    const sqkd_status st = sqkd_validate(&text, &all_pass);
    if (st != SQKD_OK) return exit_code_for(st);
    std::fputs(text, stdout);
    sqkd_string_free(text);
    if (!all_pass) {
      std::fprintf(stderr, "error: consistency checks failed\n");
      return kExitValidation;
    }
    return kExitOk;
  }

  if (!ensure_dir(out_dir)) return kExitFailure;

  ExperimentHandle exp;
  {
    sqkd_status st;
    if ((figures->parsed() || contour->parsed()) && config_path.empty()) {
      st = sqkd_experiment_load_text(kDefaultConfigText, &exp.ptr);
    } else {
      st = sqkd_experiment_load(config_path.c_str(), &exp.ptr);
    }
    if (st != SQKD_OK) return exit_code_for(st);
  }

  if (figures->parsed() || contour->parsed()) {
    if (contour->parsed()) figure_id = "cat-squeezing-contour";
    if (!figure_id.empty()) {
      const sqkd_status st = sqkd_figure(exp.ptr, figure_id.c_str(), out_dir.c_str());
      if (st != SQKD_OK) return exit_code_for(st);
      std::printf("wrote %s dataset to %s\n", figure_id.c_str(), out_dir.c_str());
    } else {
      for (const char* const* id = sqkd_figure_ids(); *id; ++id) {
        const sqkd_status st = sqkd_figure(exp.ptr, *id, out_dir.c_str());
        if (st != SQKD_OK) return exit_code_for(st);
        std::printf("wrote %s dataset to %s\n", *id, out_dir.c_str());
      }
    }
    return kExitOk;
  }

  if (sweep->parsed()) {
    const std::string path = out_dir + "/sweep-eta.csv";
    double zero_rate = 0.0, zero_info = 0.0;
    const sqkd_status st = sqkd_sweep_eta(exp.ptr, 197, path.c_str(), &zero_rate, &zero_info);
    if (st != SQKD_OK) return exit_code_for(st);
    std::printf("wrote %s (delta_i zero: rate formula eta=%.6f, info difference eta=%.6f)\n",
                path.c_str(), zero_rate, zero_info);
    return kExitOk;
  }

  // run-protocol
  if (*seed_opt) {
    const sqkd_status st = sqkd_experiment_set_seed(exp.ptr, seed);
    if (st != SQKD_OK) return exit_code_for(st);
  }
  if (full_numeric) {
    const sqkd_status st = sqkd_experiment_set_full_numeric(exp.ptr, 1);
    if (st != SQKD_OK) return exit_code_for(st);
  }
  int has_seed = 0;
  sqkd_experiment_has_seed(exp.ptr, &has_seed);
  if (!has_seed) {
    std::fprintf(stderr, "error: no seed configured; add [run] seed or pass --seed\n");
    return kExitConfig;
  }

  {
    const sqkd_status st = sqkd_experiment_run(exp.ptr);
    if (st != SQKD_OK) return exit_code_for(st);
  }
  {
    const std::string trials = out_dir + "/trials.csv";
    const sqkd_status st = sqkd_experiment_write_trials(exp.ptr, trials.c_str());
    if (st != SQKD_OK) return exit_code_for(st);
  }
  {
    const std::string report = out_dir + "/report.json";
    const sqkd_status st = sqkd_experiment_write_report(exp.ptr, report.c_str());
    if (st != SQKD_OK) return exit_code_for(st);
  }
  int secure = 0;
  std::uint64_t key_bits = 0;
  sqkd_experiment_secure(exp.ptr, &secure);
  sqkd_experiment_key_bits(exp.ptr, &key_bits);
  std::printf("wrote %s/trials.csv and %s/report.json (secure=%s, key_bits=%" PRIu64 ")\n",
              out_dir.c_str(), out_dir.c_str(), secure ? "true" : "false", key_bits);
  return kExitOk;
}
