#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qkdsim/config.hpp"
#include "qkdsim/csv.hpp"
#include "qkdsim/engine.hpp"
#include "qkdsim/postprocess.hpp"
#include "qkdsim/presets.hpp"

namespace {

double parse_double(const std::string& text) {
    try {
        std::size_t pos = 0;
        double value = std::stod(text, &pos);
        if (pos != text.size())
            throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw qkdsim::ConfigError("not a number: " + text);
    }
}

void print_metrics(const qkdsim::LinkMetrics& metrics) {
    using qkdsim::format_number;
    std::cout << "raw_click_rate_hz: " << format_number(metrics.raw_click_rate_hz) << "\n"
              << "conclusive_rate_hz: " << format_number(metrics.conclusive_rate_hz) << "\n"
              << "sifted_rate_hz: " << format_number(metrics.sifted_rate_hz) << "\n"
              << "qber: " << format_number(metrics.qber) << "\n"
              << "nbr_hz: " << format_number(metrics.nbr_hz) << "\n"
              << "signal_counts: " << format_number(metrics.signal_counts) << "\n"
              << "dark_counts: " << format_number(metrics.dark_counts) << "\n"
              << "misallocated_counts: " << format_number(metrics.misallocated_counts) << "\n"
              << "sifted_bits: " << format_number(metrics.sifted_bits) << "\n"
              << "insufficient_data: " << (metrics.insufficient_data ? "true" : "false")
              << "\n";
}

int do_run(const std::string& config_path) {
    qkdsim::ScenarioConfig config = qkdsim::parse_config_file(config_path);
    print_metrics(qkdsim::run_link(config));
    return 0;
}

int do_preset(const std::string& name, const std::string& out_dir,
              std::optional<std::uint64_t> seed) {
    for (const auto& path : qkdsim::run_preset(name, out_dir, seed))
        std::cout << path.string() << "\n";
    return 0;
}

int do_sweep(const std::string& parameter_name, const std::vector<std::string>& args) {
    qkdsim::SweepParameter parameter =
        qkdsim::sweep_parameter_from_string(parameter_name);
    if (args.size() < 2)
        throw qkdsim::ConfigError("sweep needs at least one value and a config file");
    std::vector<double> values;
    values.reserve(args.size() - 1);
    for (std::size_t i = 0; i + 1 < args.size(); ++i)
        values.push_back(parse_double(args[i]));
    qkdsim::ScenarioConfig config = qkdsim::parse_config_file(args.back());
    auto rows = qkdsim::sweep(parameter, values, config);
    std::cout << qkdsim::csv_header() << "\n";
    for (const auto& [value, metrics] : rows)
        std::cout << qkdsim::csv_row(value, metrics) << "\n";
    return 0;
}

int do_keys(const std::string& config_path, const std::string& key_path) {
    using qkdsim::format_number;
    qkdsim::ScenarioConfig config = qkdsim::parse_config_file(config_path);
    qkdsim::DistilledKey result = qkdsim::distill_key(config);
    std::cout << "sifted_bits: " << result.sifted_bits << "\n"
              << "compared_bits: " << result.compared_bits << "\n"
              << "measured_qber: " << format_number(result.measured_qber) << "\n"
              << "reconciled_bits: " << result.reconciled_bits << "\n"
              << "disclosed_bits: " << result.disclosed_bits << "\n"
              << "final_bits: " << result.final_bits << "\n"
              << "converged: " << (result.converged ? "true" : "false") << "\n";
    if (!result.converged) {
        std::cerr << "error: reconciliation did not converge, no key written\n";
        return 2;
    }
    qkdsim::write_key_file(key_path, result.key);
    std::cout << "key_file: " << key_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"B92 polarization-encoded QKD link and network simulator"};
    app.require_subcommand(1);

    std::string run_config;
    CLI::App* run_cmd =
        app.add_subcommand("run", "Run one scenario and print its link metrics");
    run_cmd->add_option("config", run_config, "Scenario config file (JSON)")->required();

    std::string preset_name;
    std::string preset_out = ".";
    std::optional<std::uint64_t> preset_seed;
    CLI::App* preset_cmd = app.add_subcommand(
        "preset", "Run a named experiment preset and write its CSV tables");
    preset_cmd
        ->add_option("name", preset_name,
                     "One of: p2p_baseline, fig4_clock_sweep, fig5_distance_sweep, "
                     "table1_network")
        ->required();
    preset_cmd->add_option("--out", preset_out, "Output directory (default: .)");
    preset_cmd->add_option("--seed", preset_seed, "Override the preset's base seed");

    std::string sweep_param;
    std::vector<std::string> sweep_args;
    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep", "Sweep one parameter over given values, print CSV to stdout");
    sweep_cmd
        ->add_option("parameter", sweep_param,
                     "clock_hz, fiber_length_km, or attenuation_equivalent_db")
        ->required();
    sweep_cmd
        ->add_option("args", sweep_args,
                     "Sweep values followed by the scenario config file")
        ->required()
        ->expected(-2);

    std::string keys_config;
    std::string keys_out;
    CLI::App* keys_cmd = app.add_subcommand(
        "keys", "Distill a final key (Monte-Carlo run plus postprocessing)");
    keys_cmd->add_option("config", keys_config, "Scenario config file (JSON)")->required();
    keys_cmd->add_option("--emit-keys", keys_out, "File receiving the packed key bits")
        ->required();

    try {
        app.parse(argc, argv);
        if (run_cmd->parsed()) return do_run(run_config);
        if (preset_cmd->parsed()) return do_preset(preset_name, preset_out, preset_seed);
        if (sweep_cmd->parsed()) return do_sweep(sweep_param, sweep_args);
        if (keys_cmd->parsed()) return do_keys(keys_config, keys_out);
        return 1;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const qkdsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
