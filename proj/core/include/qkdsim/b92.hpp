#pragma once

#include <cstdint>
#include <numbers>
#include <vector>

#include "qkdsim/detection.hpp"
#include "qkdsim/polarization.hpp"
#include "qkdsim/rng.hpp"
#include "qkdsim/source.hpp"

namespace qkdsim {

/// Receiver geometry for the two-state protocol.  A passive splitter routes
/// each incoming photon onto one of two polarizing analyzers.  A transmitted
/// photon behind analyzer1 can only have come from the source state encoding
/// bit 1 (the analyzer is orthogonal to state 0), and vice versa for
/// analyzer0, so each click yields one conclusive bit.  Photons absorbed by
/// an analyzer are inconclusive and produce no click.
struct ReceiverSetup {
    /// Analyzer orthogonal to source state 0; a click here means bit 1.
    double analyzer1_angle_rad = std::numbers::pi / 2.0;
    /// Analyzer orthogonal to source state 1; a click here means bit 0.
    double analyzer0_angle_rad = 3.0 * std::numbers::pi / 4.0;
    /// Fraction of the beam routed to the analyzer0 arm (channel 0).
    double splitting_ratio = 0.5;
    /// Polarizer extinction ratio.  Finite extinction leaks a small fraction
    /// of orthogonally polarized light through the analyzer.
    double extinction_ratio_db = 25.0;
    /// Fraction of each clock period accepted as the detection window.
    double window_fraction = 1.0;

    void validate() const;
};

enum class MeasurementOutcome {
    no_click,     ///< photon lost before or at the detector
    ambiguous,    ///< photon absorbed by the analyzer, no information gained
    conclusive_0, ///< click on channel 0, Bob records bit 0
    conclusive_1, ///< click on channel 1, Bob records bit 1
};

/// Analyzer angle for a detection channel (0 or 1).
double analyzer_angle(const ReceiverSetup& setup, int channel);

/// Probability that a photon is routed to the given channel's arm.
double channel_routing_probability(const ReceiverSetup& setup, int channel);

/// Probability that a photon already routed onto the given analyzer is
/// transmitted towards the detector.  Depends only on the polarization angle;
/// propagation losses are accounted for by the caller.  Includes the finite
/// extinction leak.
double analyzer_pass_probability(const PolarizationState& state,
                                 const ReceiverSetup& setup, int channel);

/// Power leak fraction corresponding to an extinction ratio in dB.
double extinction_linear(double extinction_ratio_db);

/// Measure a single photon prepared in `state`.  The squared relative
/// amplitude acts as a survival probability for any residual loss carried by
/// the state itself; channel efficiencies model the detectors.
MeasurementOutcome measure_pulse(const PolarizationState& state,
                                 const ReceiverSetup& setup, RandomStream& rng,
                                 double efficiency0 = 1.0,
                                 double efficiency1 = 1.0);

struct SiftedKey {
    Bits bits;
    /// Clock slot each bit was assigned to (Bob's registered slot).
    std::vector<std::int64_t> source_slots;
};

struct SiftResult {
    SiftedKey alice;
    SiftedKey bob;
    /// Index into the input click list for each retained bit.
    std::vector<std::size_t> retained_clicks;
    /// Slots discarded because more than one conclusive click landed in them.
    std::uint64_t multi_click_slots = 0;
    /// Clicks registered outside the transmitted slot range.
    std::uint64_t out_of_range_clicks = 0;
};

/// Build the sifted keys from Bob's conclusive clicks.  Bob announces the
/// registered slot of every usable click; Alice keeps the bit she sent in
/// that slot, Bob keeps the bit implied by the clicking channel.  Slots with
/// multiple clicks and clicks outside [0, alice_bits.size()) are dropped.
/// `conclusive_clicks` must be ordered by slot, as produced by the detection
/// pipeline.
SiftResult sift(const Bits& alice_bits,
                const std::vector<DetectionRecord>& conclusive_clicks);

struct QberSample {
    double qber = 0.0;
    std::uint64_t compared_bits = 0;
    std::uint64_t errors = 0;
    /// Key material left after the compared bits are removed.
    Bits alice_remaining;
    Bits bob_remaining;
};

/// Estimate the error rate by publicly comparing a random sample of the
/// sifted key.  Compared positions are discarded from the remaining keys.
/// A fraction of 1 compares everything and leaves nothing behind.
QberSample measure_qber(const Bits& alice, const Bits& bob,
                        double sample_fraction, RandomStream& rng);

} // namespace qkdsim
