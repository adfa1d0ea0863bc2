#pragma once

#include <string>
#include <utility>

#include "stackmfg/params.hpp"

namespace stackmfg {

/// Parse a plain-text config file (one "key = value" per line, '#'
/// comments). Unspecified keys keep the defaults of ModelParams /
/// SimConfig. Throws ConfigError on a missing file, unknown key, or a
/// non-numeric value, naming the key and line.
std::pair<ModelParams, SimConfig> load_config(const std::string& path);

/// Parse config text directly (same format and errors as load_config).
std::pair<ModelParams, SimConfig> parse_config(const std::string& text);

/// Full round-trippable serialization: every key, current values.
std::string serialize_config(const ModelParams& params, const SimConfig& config);

void save_config(const ModelParams& params, const SimConfig& config, const std::string& path);

}  // namespace stackmfg
