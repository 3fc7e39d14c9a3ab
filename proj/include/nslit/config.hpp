#pragma once

#include <string>

#include "nslit/experiment.hpp"

namespace nslit {

/// Reads an experiment configuration (YAML, unit-suffixed values).
/// Relative wavelength-table paths resolve against the file's directory.
/// Throws ConfigError naming the offending key.
ExperimentConfig parse_config(const std::string& path);

/// Parses configuration text; `base_dir` resolves relative table paths.
ExperimentConfig parse_config_text(const std::string& text, const std::string& base_dir = ".");

/// Canonical YAML rendering; parse_config_text(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

}  // namespace nslit
