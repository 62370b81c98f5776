#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qkdsim/rng.hpp"

namespace qkdsim {

/// Converts a Gaussian FWHM to its standard deviation (divide by 2 sqrt(2 ln 2)).
double sigma_from_fwhm(double fwhm);

/// Standard normal CDF.
double normal_cdf(double z);

enum class DetectorVariant { standard, enhanced };

/// Single-photon avalanche detector model. Timing jitter (FWHM) and avalanche
/// peak shift depend on the incident count rate; both are given as sorted
/// (rate_hz, seconds) tables, interpolated linearly and clamped at the ends.
struct DetectorModel {
    DetectorVariant variant = DetectorVariant::enhanced;
    double efficiency = 0.42;
    double dark_rate_hz = 100.0;
    double dead_time_s = 50e-9;
    std::vector<std::pair<double, double>> jitter_table;
    std::vector<std::pair<double, double>> shift_table;

    void validate() const;

    /// Thick-junction commercial module, passively quenched.
    static DetectorModel standard_spcm();
    /// Same module with the trigger threshold moved to the early avalanche
    /// edge: tighter jitter, much weaker rate dependence.
    static DetectorModel enhanced_spcm();
};

/// Timing jitter FWHM (seconds) at the given incident count rate.
double jitter_at_rate(const DetectorModel& model, double incident_rate_hz);

/// Avalanche peak shift (seconds) at the given incident count rate.
double shift_at_rate(const DetectorModel& model, double incident_rate_hz);

/// One registered click. `slot` is where the acquisition assigned it;
/// `true_slot` is the emission slot (-1 for dark counts); `offset_s` is the
/// residual from the registered slot center, always within half a slot.
struct DetectionRecord {
    std::int64_t slot = 0;
    std::int64_t true_slot = -1;
    int channel = 0;
    double offset_s = 0.0;
};

/// Quantizes a click that fell `offset_s` from the center of `true_slot`
/// to the nearest slot. Returns the registered slot and the residual offset.
std::pair<std::int64_t, double> registered_slot(double offset_s,
                                                std::int64_t true_slot,
                                                double slot_duration_s);

/// Poisson-process dark counts over `duration_s`, uniform in time.
/// `channel` fixes the channel label; pass -1 to draw it uniformly.
std::vector<DetectionRecord> dark_clicks(double dark_rate_hz, double duration_s,
                                         double slot_duration_s, RandomStream& rng,
                                         int channel = -1);

/// Non-paralyzable dead time: drops any click within `dead_time_s` after an
/// accepted click on the same channel. Input must be time-ordered.
std::vector<DetectionRecord> apply_dead_time(const std::vector<DetectionRecord>& records,
                                             double dead_time_s,
                                             double slot_duration_s);

/// Mean accepted rate of a non-paralyzable counter: r / (1 + r * dead_time).
double dead_time_throughput(double rate_hz, double dead_time_s);

/// Probability that a click whose timing error is Gaussian(shift, sigma)
/// lands inside the collection window of the slot `k` positions away from its
/// true slot. The window covers the central `window_fraction` of each slot.
double window_capture_probability(double sigma_s, double shift_s,
                                  double slot_duration_s, double window_fraction,
                                  std::int64_t k);

/// Total capture probability over all slots (the click is recorded at all).
double total_capture_probability(double sigma_s, double shift_s,
                                 double slot_duration_s, double window_fraction);

/// Probability that a recorded click is assigned to a wrong slot.
double misallocation_probability(double sigma_s, double shift_s,
                                 double slot_duration_s,
                                 double window_fraction = 1.0);

} // namespace qkdsim
