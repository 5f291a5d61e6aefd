#pragma once

#include "boltzmix/bounds.hpp"
#include "boltzmix/cross_section.hpp"
#include "boltzmix/dsmc.hpp"
#include "boltzmix/species.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace boltzmix::cli {

using ordered_json = nlohmann::ordered_json;

/// Parsed top-level configuration file. Sections beyond `species` and
/// `cross_section` are optional; subcommands check for what they need.
struct ToolConfig {
  SpeciesSet species;
  CrossSection cross_section;
  std::optional<OmegaConstants> omega;
  std::optional<SimConfig> sim;
};

ToolConfig load_config(const std::string& path);

/// Fully-resolved echo of a simulation configuration (defaults filled in,
/// seed overrides applied), key order fixed.
ordered_json echo_config(const ToolConfig& config);

/// Inclusive `start:step:end` range; the end point is kept when it lands
/// within half a step.
std::vector<double> parse_range(const std::string& text);

}  // namespace boltzmix::cli
