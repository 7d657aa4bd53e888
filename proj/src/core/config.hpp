#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "core/device.hpp"
#include "core/protocol.hpp"

namespace sqkd {

struct RunConfig {
  std::optional<std::uint64_t> seed;  // may instead come from the command line
  std::uint64_t rounds = 10000;
  bool full_numeric = false;
  int grid_points = 4096;
  int dim = 0;  // 0 = auto
  int threads = 0;
  int slices = 4;
};

struct Config {
  std::optional<PhysicalJunctionParams> device;  // set when [device] was given
  EffectiveParams effective;                     // always resolved
  SourceConfig source;
  ChannelConfig channel;
  MeasurementScheme scheme;
  RunConfig run;
};

// INI-style text: [section] headers, key = value lines, # or ; comments.
// Exactly one of [device] and [effective] must be present. All diagnostics
// name the offending section and key. Value errors and cross-field
// violations raise ConfigError; junction parameters outside the operating
// regime propagate RegimeViolation from the device model.
Config parse_config_text(const std::string& text);
Config load_config(const std::string& path);

}  // namespace sqkd
