#include "qkdsim/csv.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace qkdsim {

std::string format_number(double value) {
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc())
        throw std::runtime_error("number formatting failed");
    return std::string(buffer, ptr);
}

std::string csv_header() {
    return "parameter_value,raw_click_rate_hz,conclusive_rate_hz,sifted_rate_hz,"
           "qber,nbr_hz,signal_counts,dark_counts,misallocated_counts,"
           "insufficient_data_flag";
}

std::string csv_row(double parameter_value, const LinkMetrics& metrics) {
    std::string row = format_number(parameter_value);
    row += ',';
    row += format_number(metrics.raw_click_rate_hz);
    row += ',';
    row += format_number(metrics.conclusive_rate_hz);
    row += ',';
    row += format_number(metrics.sifted_rate_hz);
    row += ',';
    row += format_number(metrics.qber);
    row += ',';
    row += format_number(metrics.nbr_hz);
    row += ',';
    row += format_number(metrics.signal_counts);
    row += ',';
    row += format_number(metrics.dark_counts);
    row += ',';
    row += format_number(metrics.misallocated_counts);
    row += ',';
    row += metrics.insufficient_data ? '1' : '0';
    return row;
}

void write_csv(const std::filesystem::path& path,
               const std::vector<std::pair<double, LinkMetrics>>& rows) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open output file: " + path.string());
    out << csv_header() << '\n';
    for (const auto& [value, metrics] : rows) out << csv_row(value, metrics) << '\n';
    out.close();
    if (!out) throw std::runtime_error("failed writing output file: " + path.string());
}

} // namespace qkdsim
