#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qkdsim/engine.hpp"

namespace qkdsim {

/// Raised for every configuration problem: unreadable file, malformed
/// syntax, unknown key, or a field violating an invariant.  Kept distinct
/// from runtime failures so the command line can report them separately.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parse a JSON scenario description.  Every field is optional and defaults
/// to the baseline point-to-point setup; an empty file yields the defaults.
/// Unknown keys are rejected with their full path, as are values violating a
/// field invariant.
ScenarioConfig parse_config_file(const std::filesystem::path& path);
ScenarioConfig parse_config_text(const std::string& text);

/// Serialize a config so that re-parsing reproduces it exactly.
std::string serialize_config(const ScenarioConfig& config);

SimMode sim_mode_from_string(std::string_view name);
std::string_view to_string(SimMode mode);

DetectorVariant detector_variant_from_string(std::string_view name);
std::string_view to_string(DetectorVariant variant);

} // namespace qkdsim
