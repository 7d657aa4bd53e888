#include "core/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "core/error.hpp"
#include "core/fock.hpp"

namespace sqkd {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void bad(const std::string& section, const std::string& key,
                      const std::string& msg) {
  fail(ErrorCode::ConfigError, "[" + section + "] " + key + ": " + msg);
}

using Section = std::map<std::string, std::string>;

struct Ini {
  std::map<std::string, Section> sections;

  bool has(const std::string& s) const { return sections.count(s) != 0; }

  double number(const std::string& s, const std::string& k, double fallback) const {
    auto it = sections.find(s);
    if (it == sections.end()) return fallback;
    auto jt = it->second.find(k);
    if (jt == it->second.end()) return fallback;
    try {
      std::size_t pos = 0;
      const double v = std::stod(jt->second, &pos);
      if (pos != jt->second.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      bad(s, k, "not a number: '" + jt->second + "'");
    }
  }

  std::optional<std::uint64_t> integer(const std::string& s, const std::string& k) const {
    auto it = sections.find(s);
    if (it == sections.end()) return std::nullopt;
    auto jt = it->second.find(k);
    if (jt == it->second.end()) return std::nullopt;
    try {
      std::size_t pos = 0;
      const unsigned long long v = std::stoull(jt->second, &pos);
      if (pos != jt->second.size()) throw std::invalid_argument("");
      return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
      bad(s, k, "not a nonnegative integer: '" + jt->second + "'");
    }
  }

  bool flag(const std::string& s, const std::string& k, bool fallback) const {
    auto it = sections.find(s);
    if (it == sections.end()) return fallback;
    auto jt = it->second.find(k);
    if (jt == it->second.end()) return fallback;
    const std::string& v = jt->second;
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    bad(s, k, "not a boolean: '" + v + "'");
  }

  std::string text(const std::string& s, const std::string& k,
                   const std::string& fallback) const {
    auto it = sections.find(s);
    if (it == sections.end()) return fallback;
    auto jt = it->second.find(k);
    if (jt == it->second.end()) return fallback;
    return jt->second;
  }

  bool field_present(const std::string& s, const std::string& k) const {
    auto it = sections.find(s);
    return it != sections.end() && it->second.count(k) != 0;
  }
};

Ini read_ini(const std::string& raw) {
  Ini ini;
  std::istringstream in(raw);
  std::string line;
  std::string section;
  int lineno = 0;
  const std::map<std::string, std::vector<std::string>> known = {
      {"device", {"capacitance", "inductance", "josephson", "charge", "drive_flux"}},
      {"effective", {"omega", "nu", "mu"}},
      {"source", {"v_mod", "phi_center", "v_center"}},
      {"channel", {"eta", "excess_noise"}},
      {"scheme", {"kind", "time_jitter"}},
      {"run", {"seed", "rounds", "full_numeric", "grid_points", "dim", "threads", "slices"}},
  };
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t cut = line.find_first_of("#;");
    if (cut != std::string::npos) line.erase(cut);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        fail(ErrorCode::ConfigError,
             "line " + std::to_string(lineno) + ": unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (!known.count(section)) {
        fail(ErrorCode::ConfigError,
             "line " + std::to_string(lineno) + ": unknown section [" + section + "]");
      }
      ini.sections[section];
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      fail(ErrorCode::ConfigError,
           "line " + std::to_string(lineno) + ": expected key = value");
    }
    if (section.empty()) {
      fail(ErrorCode::ConfigError,
           "line " + std::to_string(lineno) + ": key outside any section");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto& allowed = known.at(section);
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      bad(section, key, "unknown key");
    }
    if (!ini.sections[section].emplace(key, value).second) {
      bad(section, key, "duplicate key");
    }
  }
  return ini;
}

}  // namespace

Config parse_config_text(const std::string& text) {
  const Ini ini = read_ini(text);
  Config cfg;

  const bool has_dev = ini.has("device");
  const bool has_eff = ini.has("effective");
  if (has_dev == has_eff) {
    fail(ErrorCode::ConfigError, "exactly one of [device] and [effective] is required");
  }
  if (has_dev) {
    PhysicalJunctionParams p;
    for (const char* k : {"capacitance", "inductance", "josephson", "drive_flux"}) {
      if (!ini.field_present("device", k)) bad("device", k, "missing");
    }
    p.capacitance = ini.number("device", "capacitance", 0.0);
    p.inductance = ini.number("device", "inductance", 0.0);
    p.josephson = ini.number("device", "josephson", 0.0);
    p.charge = ini.number("device", "charge", 1.0);
    p.drive_flux = ini.number("device", "drive_flux", 0.0);
    cfg.device = p;
    cfg.effective = effective_params(p);
  } else {
    for (const char* k : {"omega", "nu"}) {
      if (!ini.field_present("effective", k)) bad("effective", k, "missing");
    }
    EffectiveParams e;
    e.omega = ini.number("effective", "omega", 0.0);
    e.nu = ini.number("effective", "nu", 0.0);
    e.mu = ini.number("effective", "mu", 100.0 * e.omega);
    if (e.omega <= 0.0) bad("effective", "omega", "must be positive");
    if (e.nu <= 0.0) bad("effective", "nu", "must be positive");
    e.omega_eff = e.omega - e.nu;
    cfg.effective = e;
  }

  cfg.source.v_mod = ini.number("source", "v_mod", 1.0);
  cfg.source.phi_center = ini.number("source", "phi_center", 0.0);
  cfg.source.v_center = ini.number("source", "v_center", 0.0);
  if (cfg.source.v_mod <= 0.0) bad("source", "v_mod", "must be positive");

  cfg.channel.eta = ini.number("channel", "eta", 1.0);
  cfg.channel.excess_noise = ini.number("channel", "excess_noise", 0.0);
  if (cfg.channel.eta <= 0.0 || cfg.channel.eta > 1.0) {
    bad("channel", "eta", "must lie in (0, 1]");
  }
  if (cfg.channel.excess_noise < 0.0) bad("channel", "excess_noise", "must be nonnegative");

  const std::string kind = ini.text("scheme", "kind", "arbitrary-time");
  if (kind == "arbitrary-time") {
    cfg.scheme = MeasurementScheme::arbitrary_time();
  } else if (kind == "time-stamped") {
    cfg.scheme = MeasurementScheme::time_stamped();
  } else {
    bad("scheme", "kind", "expected arbitrary-time or time-stamped");
  }
  cfg.scheme.time_jitter = ini.number("scheme", "time_jitter", 0.0);
  if (cfg.scheme.time_jitter < 0.0) bad("scheme", "time_jitter", "must be nonnegative");

  cfg.run.seed = ini.integer("run", "seed");
  cfg.run.rounds = ini.integer("run", "rounds").value_or(10000);
  cfg.run.full_numeric = ini.flag("run", "full_numeric", false);
  cfg.run.grid_points = static_cast<int>(ini.integer("run", "grid_points").value_or(4096));
  cfg.run.dim = static_cast<int>(ini.integer("run", "dim").value_or(0));
  cfg.run.threads = static_cast<int>(ini.integer("run", "threads").value_or(0));
  cfg.run.slices = static_cast<int>(ini.integer("run", "slices").value_or(4));
  if (cfg.run.rounds == 0) bad("run", "rounds", "must be at least 1");
  if (cfg.run.grid_points < 64) bad("run", "grid_points", "must be at least 64");
  if (cfg.run.slices < 1 || cfg.run.slices > 5) bad("run", "slices", "must lie in 1..5");

  if (cfg.scheme.kind == MeasurementScheme::Kind::TimeStamped) {
    const double ratio = cfg.effective.omega_eff / cfg.effective.nu;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 || std::llround(rounded) % 4 != 0) {
      bad("scheme", "kind",
          "time-stamped readout needs omega_eff/nu divisible by 4, got " +
              std::to_string(ratio));
    }
    // Folding is only invertible-in-distribution when the modulation stays
    // clear of the fold point by several standard deviations.
    const double margin = 4.0 * std::sqrt(cfg.source.v_mod * kVacuumNoise);
    if (std::abs(cfg.source.phi_center) < margin || std::abs(cfg.source.v_center) < margin) {
      bad("source", "phi_center",
          "time-stamped readout needs |centers| >= " + std::to_string(margin) +
              " for the configured v_mod");
    }
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace sqkd
