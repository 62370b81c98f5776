#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qkdsim/b92.hpp"
#include "qkdsim/detection.hpp"
#include "qkdsim/link.hpp"
#include "qkdsim/postprocess.hpp"
#include "qkdsim/source.hpp"

namespace qkdsim {

enum class SimMode { analytic, monte_carlo };

struct DetectorPair {
    DetectorModel channel0 = DetectorModel::enhanced_spcm();
    DetectorModel channel1 = DetectorModel::enhanced_spcm();
};

struct PostprocessConfig {
    double reconciliation_efficiency = 1.2;
    /// Extra key fraction removed during privacy amplification.
    double pa_margin = 0.0;
    /// Fraction of the sifted key publicly compared to estimate the error
    /// rate before reconciliation.  A value of 1 estimates on the full key
    /// without discarding it (simulation shortcut).
    double sample_fraction = 0.1;
    CascadeParams cascade;

    void validate() const;
};

/// Complete description of one link experiment.
struct ScenarioConfig {
    SourceConfig source;
    /// Experiment length; used when slot_count is zero.
    double duration_s = 0.01;
    /// Explicit slot count; zero derives it from duration_s and the clock.
    std::uint64_t slot_count = 0;
    LinkPath path;
    DetectorPair detectors;
    ReceiverSetup receiver;
    PostprocessConfig postprocessing;
    std::uint64_t seed = 0;
    SimMode mode = SimMode::analytic;

    std::uint64_t resolved_slot_count() const;
    void validate() const;
};

struct LinkMetrics {
    double raw_click_rate_hz = 0.0;
    double conclusive_rate_hz = 0.0;
    double sifted_rate_hz = 0.0;
    double qber = 0.0;
    double nbr_hz = 0.0;
    /// Sifted-bit provenance.  Monte-Carlo runs report exact tallies;
    /// analytic runs report expected values, so these are fractional there.
    double signal_counts = 0.0;
    double dark_counts = 0.0;
    double misallocated_counts = 0.0;
    double sifted_bits = 0.0;
    /// Set when no sifted bits exist; qber is then reported as 0.
    bool insufficient_data = false;
};

LinkMetrics run_link(const ScenarioConfig& config);

/// Like run_link but also returns the sifted keys (Monte-Carlo mode only;
/// analytic mode leaves them empty).
struct RunResult {
    LinkMetrics metrics;
    Bits alice_key;
    Bits bob_key;
};
RunResult run_link_detailed(const ScenarioConfig& config);

struct NetworkPort {
    int port_id = 0;
    LinkPath drop_path = LinkPath::none();
};

/// Star topology: one transmitter feeding a passive splitter, each active
/// port continuing over its own drop fiber to an independent receiver.
struct NetworkTopology {
    int port_count = 32;
    LinkPath shared_upstream = LinkPath::none();
    std::vector<NetworkPort> active_ports;

    void validate() const;
};

/// Run every active port as an independent link over the concatenated
/// upstream + drop path.  Ports draw from decorrelated substreams derived
/// from (seed, port_id), so adding a port never shifts another port's
/// randomness.
std::vector<std::pair<int, LinkMetrics>> run_network(const NetworkTopology& topology,
                                                     const ScenarioConfig& base);

enum class SweepParameter { clock_hz, fiber_length_km, attenuation_equivalent_db };

SweepParameter sweep_parameter_from_string(std::string_view name);
std::string_view to_string(SweepParameter parameter);

/// One run per value, all with the base seed.  The attenuation_equivalent_db
/// parameter replaces the fiber by a lumped attenuator with the given loss:
/// same power budget as a fiber of matching loss but no dispersion.
std::vector<std::pair<double, LinkMetrics>> sweep(SweepParameter parameter,
                                                  const std::vector<double>& values,
                                                  const ScenarioConfig& base);

struct DistilledKey {
    Bits key;
    LinkMetrics metrics;
    std::uint64_t sifted_bits = 0;
    std::uint64_t compared_bits = 0;
    double measured_qber = 0.0;
    /// Bits entering reconciliation after the comparison sample is removed.
    std::uint64_t reconciled_bits = 0;
    std::uint64_t disclosed_bits = 0;
    std::uint64_t final_bits = 0;
    bool converged = false;
};

/// Full protocol run: stochastic link, error estimate on a public sample,
/// parity reconciliation, and Toeplitz compression.  The final length is
/// reconciled_bits minus the announced parities, the verification digest,
/// and the eavesdropper/margin allowance.  Always runs in monte_carlo mode.
DistilledKey distill_key(const ScenarioConfig& config);

} // namespace qkdsim
