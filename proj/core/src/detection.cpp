#include "qkdsim/detection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qkdsim {

namespace {

constexpr double kTwoSqrtTwoLnTwo = 2.3548200450309493; // FWHM / sigma for a Gaussian

double interpolate_clamped(const std::vector<std::pair<double, double>>& table,
                           double x) {
    if (table.empty()) throw std::invalid_argument("detector table must not be empty");
    if (x <= table.front().first) return table.front().second;
    if (x >= table.back().first) return table.back().second;
    for (std::size_t i = 1; i < table.size(); ++i) {
        if (x <= table[i].first) {
            const auto& [x0, y0] = table[i - 1];
            const auto& [x1, y1] = table[i];
            double t = (x - x0) / (x1 - x0);
            return y0 + t * (y1 - y0);
        }
    }
    return table.back().second;
}

void validate_table(const std::vector<std::pair<double, double>>& table,
                    const char* name, bool positive_values) {
    if (table.empty()) throw std::invalid_argument(std::string("detector.") + name +
                                                   " must not be empty");
    double prev = -1.0;
    for (const auto& [rate, value] : table) {
        if (!(rate >= 0.0) || !std::isfinite(rate))
            throw std::invalid_argument(std::string("detector.") + name +
                                        " rates must be finite and >= 0");
        if (rate <= prev)
            throw std::invalid_argument(std::string("detector.") + name +
                                        " rates must be strictly increasing");
        if (!std::isfinite(value) || (positive_values ? !(value > 0.0) : value < 0.0))
            throw std::invalid_argument(std::string("detector.") + name +
                                        (positive_values ? " values must be > 0"
                                                         : " values must be >= 0"));
        prev = rate;
    }
}

} // namespace

double sigma_from_fwhm(double fwhm) {
    return fwhm / kTwoSqrtTwoLnTwo;
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

void DetectorModel::validate() const {
    if (!(efficiency >= 0.0) || efficiency > 1.0)
        throw std::invalid_argument("detector.efficiency must lie in [0, 1]");
    if (!(dark_rate_hz >= 0.0) || !std::isfinite(dark_rate_hz))
        throw std::invalid_argument("detector.dark_rate_hz must be finite and >= 0");
    if (!(dead_time_s >= 0.0) || !std::isfinite(dead_time_s))
        throw std::invalid_argument("detector.dead_time_s must be finite and >= 0");
    validate_table(jitter_table, "jitter_table", true);
    validate_table(shift_table, "shift_table", false);
}

DetectorModel DetectorModel::standard_spcm() {
    DetectorModel m;
    m.variant = DetectorVariant::standard;
    m.jitter_table = {{1e4, 570e-12}, {2e6, 950e-12}};
    m.shift_table = {{1e4, 0.0}, {2e6, 300e-12}};
    return m;
}

DetectorModel DetectorModel::enhanced_spcm() {
    DetectorModel m;
    m.variant = DetectorVariant::enhanced;
    m.jitter_table = {{1e4, 370e-12}, {2e6, 450e-12}};
    m.shift_table = {{1e4, 0.0}, {2e6, 50e-12}};
    return m;
}

double jitter_at_rate(const DetectorModel& model, double incident_rate_hz) {
    if (!(incident_rate_hz >= 0.0))
        throw std::invalid_argument("incident_rate_hz must be >= 0");
    return interpolate_clamped(model.jitter_table, incident_rate_hz);
}

double shift_at_rate(const DetectorModel& model, double incident_rate_hz) {
    if (!(incident_rate_hz >= 0.0))
        throw std::invalid_argument("incident_rate_hz must be >= 0");
    return interpolate_clamped(model.shift_table, incident_rate_hz);
}

std::pair<std::int64_t, double> registered_slot(double offset_s,
                                                std::int64_t true_slot,
                                                double slot_duration_s) {
    if (!(slot_duration_s > 0.0))
        throw std::invalid_argument("slot_duration_s must be > 0");
    // Nearest slot, ties rounded away from zero.
    auto k = static_cast<std::int64_t>(std::llround(offset_s / slot_duration_s));
    return {true_slot + k, offset_s - static_cast<double>(k) * slot_duration_s};
}

std::vector<DetectionRecord> dark_clicks(double dark_rate_hz, double duration_s,
                                         double slot_duration_s, RandomStream& rng,
                                         int channel) {
    if (!(dark_rate_hz >= 0.0) || !(duration_s >= 0.0))
        throw std::invalid_argument("dark_clicks: rate and duration must be >= 0");
    if (!(slot_duration_s > 0.0))
        throw std::invalid_argument("dark_clicks: slot_duration_s must be > 0");

    std::uint64_t count = rng.poisson(dark_rate_hz * duration_s);
    std::vector<double> times(count);
    for (auto& t : times) t = rng.uniform(0.0, duration_s);
    std::sort(times.begin(), times.end());

    std::vector<DetectionRecord> records;
    records.reserve(count);
    for (double t : times) {
        DetectionRecord rec;
        rec.slot = static_cast<std::int64_t>(t / slot_duration_s);
        rec.true_slot = -1;
        rec.channel = channel >= 0 ? channel : rng.bit();
        rec.offset_s = t - (static_cast<double>(rec.slot) + 0.5) * slot_duration_s;
        records.push_back(rec);
    }
    return records;
}

namespace {

double click_time(const DetectionRecord& r, double slot_duration_s) {
    return (static_cast<double>(r.slot) + 0.5) * slot_duration_s + r.offset_s;
}

} // namespace

std::vector<DetectionRecord> apply_dead_time(const std::vector<DetectionRecord>& records,
                                             double dead_time_s,
                                             double slot_duration_s) {
    if (!(dead_time_s >= 0.0))
        throw std::invalid_argument("dead_time_s must be >= 0");
    if (!(slot_duration_s > 0.0))
        throw std::invalid_argument("slot_duration_s must be > 0");

    std::vector<DetectionRecord> accepted;
    accepted.reserve(records.size());
    double last_time[2] = {-1e300, -1e300};
    double prev = -1e300;
    for (const auto& rec : records) {
        if (rec.channel != 0 && rec.channel != 1)
            throw std::invalid_argument("apply_dead_time: channel must be 0 or 1");
        double t = click_time(rec, slot_duration_s);
        if (t < prev)
            throw std::invalid_argument("apply_dead_time: records must be time-ordered");
        prev = t;
        if (t - last_time[rec.channel] >= dead_time_s || dead_time_s == 0.0) {
            accepted.push_back(rec);
            last_time[rec.channel] = t;
        }
    }
    return accepted;
}

double dead_time_throughput(double rate_hz, double dead_time_s) {
    if (!(rate_hz >= 0.0) || !(dead_time_s >= 0.0))
        throw std::invalid_argument("dead_time_throughput: arguments must be >= 0");
    return rate_hz / (1.0 + rate_hz * dead_time_s);
}

double window_capture_probability(double sigma_s, double shift_s,
                                  double slot_duration_s, double window_fraction,
                                  std::int64_t k) {
    if (!(sigma_s >= 0.0)) throw std::invalid_argument("sigma_s must be >= 0");
    if (!(slot_duration_s > 0.0))
        throw std::invalid_argument("slot_duration_s must be > 0");
    if (!(window_fraction > 0.0) || window_fraction > 1.0)
        throw std::invalid_argument("window_fraction must lie in (0, 1]");

    double center = static_cast<double>(k) * slot_duration_s;
    double half = 0.5 * window_fraction * slot_duration_s;
    double lo = center - half;
    double hi = center + half;
    if (sigma_s == 0.0) return (shift_s >= lo && shift_s < hi) ? 1.0 : 0.0;
    return normal_cdf((hi - shift_s) / sigma_s) - normal_cdf((lo - shift_s) / sigma_s);
}

double total_capture_probability(double sigma_s, double shift_s,
                                 double slot_duration_s, double window_fraction) {
    // Sum over every slot the Gaussian reaches with non-negligible weight.
    double span = 6.0 * sigma_s + std::fabs(shift_s);
    auto reach = static_cast<std::int64_t>(span / slot_duration_s) + 1;
    double total = 0.0;
    for (std::int64_t k = -reach; k <= reach; ++k)
        total += window_capture_probability(sigma_s, shift_s, slot_duration_s,
                                            window_fraction, k);
    return total;
}

double misallocation_probability(double sigma_s, double shift_s,
                                 double slot_duration_s, double window_fraction) {
    double total = total_capture_probability(sigma_s, shift_s, slot_duration_s,
                                             window_fraction);
    if (total <= 0.0) return 0.0;
    double own = window_capture_probability(sigma_s, shift_s, slot_duration_s,
                                            window_fraction, 0);
    return 1.0 - own / total;
}

} // namespace qkdsim
