#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace qkdsim {

/// Names accepted by run_preset, in a stable order.
std::vector<std::string> preset_names();

/// Run one named, fully pinned experiment and write its results tables plus
/// a manifest describing every run into `output_dir` (created if missing).
/// The same name and seed always produce byte-identical files.  Returns the
/// paths written.
std::vector<std::filesystem::path> run_preset(const std::string& name,
                                              const std::filesystem::path& output_dir,
                                              std::optional<std::uint64_t> seed_override);

} // namespace qkdsim
