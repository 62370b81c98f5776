#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "qkdsim/engine.hpp"

namespace qkdsim {

/// Shortest decimal form that parses back to the same double; independent of
/// the process locale.
std::string format_number(double value);

/// The fixed column set every results table uses.
std::string csv_header();

std::string csv_row(double parameter_value, const LinkMetrics& metrics);

/// Write one results table with \n line endings.
void write_csv(const std::filesystem::path& path,
               const std::vector<std::pair<double, LinkMetrics>>& rows);

} // namespace qkdsim
