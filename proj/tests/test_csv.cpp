#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qkdsim/csv.hpp"

using namespace qkdsim;

TEST_CASE("format_number survives a parse round trip") {
    for (double value : {0.1, 1e9, 0.25, 1.0 / 3.0, -42.5, 0.0, 6.02214076e23,
                         2.2250738585072014e-308, 0.008711353598403688}) {
        std::string text = format_number(value);
        CHECK(std::stod(text) == value);
        CHECK(text.find(',') == std::string::npos);
    }
    CHECK(format_number(0.25) == "0.25");
    CHECK(format_number(1e9) == "1e+09");
}

TEST_CASE("header names the ten result columns") {
    CHECK(csv_header() ==
          "parameter_value,raw_click_rate_hz,conclusive_rate_hz,sifted_rate_hz,"
          "qber,nbr_hz,signal_counts,dark_counts,misallocated_counts,"
          "insufficient_data_flag");
}

TEST_CASE("rows carry one field per column") {
    LinkMetrics metrics;
    metrics.raw_click_rate_hz = 1000.0;
    metrics.conclusive_rate_hz = 900.0;
    metrics.sifted_rate_hz = 850.0;
    metrics.qber = 0.0125;
    metrics.nbr_hz = 500.0;
    metrics.signal_counts = 840.0;
    metrics.dark_counts = 7.0;
    metrics.misallocated_counts = 3.0;
    metrics.insufficient_data = false;

    std::string row = csv_row(4.2, metrics);
    std::vector<std::string> fields;
    std::stringstream stream(row);
    std::string field;
    while (std::getline(stream, field, ',')) fields.push_back(field);
    REQUIRE(fields.size() == 10);
    CHECK(fields[0] == "4.2");
    CHECK(std::stod(fields[4]) == 0.0125);
    CHECK(fields[9] == "0");

    metrics.insufficient_data = true;
    std::string flagged = csv_row(0.0, metrics);
    CHECK(flagged.back() == '1');
}

TEST_CASE("written tables use plain newlines") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "qkdsim_csv_test";
    fs::create_directories(dir);
    fs::path file = dir / "table.csv";

    LinkMetrics metrics;
    metrics.qber = 0.5;
    write_csv(file, {{1.0, metrics}, {2.0, metrics}});

    std::ifstream in(file, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string text = buffer.str();
    CHECK(text.find('\r') == std::string::npos);
    CHECK(text.front() == 'p');
    CHECK(text.back() == '\n');

    std::size_t lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    CHECK(lines == 3);
    fs::remove_all(dir);

    CHECK_THROWS_AS(write_csv(dir / "nope" / "table.csv", {}), std::runtime_error);
}
