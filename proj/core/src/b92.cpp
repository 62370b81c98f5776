#include "qkdsim/b92.hpp"

#include <cmath>
#include <stdexcept>

namespace qkdsim {

void ReceiverSetup::validate() const {
    if (!std::isfinite(analyzer1_angle_rad) || !std::isfinite(analyzer0_angle_rad))
        throw std::invalid_argument("receiver.analyzer angles must be finite");
    if (!(splitting_ratio > 0.0) || !(splitting_ratio < 1.0))
        throw std::invalid_argument("receiver.splitting_ratio must lie in (0, 1)");
    if (!(extinction_ratio_db >= 0.0) || !std::isfinite(extinction_ratio_db))
        throw std::invalid_argument("receiver.extinction_ratio_db must be finite and >= 0");
    if (!(window_fraction > 0.0) || window_fraction > 1.0)
        throw std::invalid_argument("receiver.window_fraction must lie in (0, 1]");
}

double analyzer_angle(const ReceiverSetup& setup, int channel) {
    if (channel == 0) return setup.analyzer0_angle_rad;
    if (channel == 1) return setup.analyzer1_angle_rad;
    throw std::invalid_argument("channel must be 0 or 1");
}

double channel_routing_probability(const ReceiverSetup& setup, int channel) {
    if (channel == 0) return setup.splitting_ratio;
    if (channel == 1) return 1.0 - setup.splitting_ratio;
    throw std::invalid_argument("channel must be 0 or 1");
}

double extinction_linear(double extinction_ratio_db) {
    if (!(extinction_ratio_db >= 0.0))
        throw std::invalid_argument("extinction_ratio_db must be >= 0");
    return std::pow(10.0, -extinction_ratio_db / 10.0);
}

double analyzer_pass_probability(const PolarizationState& state,
                                 const ReceiverSetup& setup, int channel) {
    double leak = extinction_linear(setup.extinction_ratio_db);
    double c = std::cos(state.angle - analyzer_angle(setup, channel));
    return (1.0 - leak) * c * c + leak;
}

MeasurementOutcome measure_pulse(const PolarizationState& state,
                                 const ReceiverSetup& setup, RandomStream& rng,
                                 double efficiency0, double efficiency1) {
    double survival = state.relative_amplitude * state.relative_amplitude;
    if (survival < 1.0 && !rng.bernoulli(survival)) return MeasurementOutcome::no_click;

    int channel = rng.bernoulli(setup.splitting_ratio) ? 0 : 1;
    if (!rng.bernoulli(analyzer_pass_probability(state, setup, channel)))
        return MeasurementOutcome::ambiguous;

    double efficiency = channel == 0 ? efficiency0 : efficiency1;
    if (!rng.bernoulli(efficiency)) return MeasurementOutcome::no_click;
    return channel == 0 ? MeasurementOutcome::conclusive_0
                        : MeasurementOutcome::conclusive_1;
}

SiftResult sift(const Bits& alice_bits,
                const std::vector<DetectionRecord>& conclusive_clicks) {
    SiftResult result;
    auto slot_count = static_cast<std::int64_t>(alice_bits.size());

    std::size_t i = 0;
    std::int64_t prev_slot = INT64_MIN;
    while (i < conclusive_clicks.size()) {
        std::int64_t slot = conclusive_clicks[i].slot;
        if (slot < prev_slot)
            throw std::invalid_argument("sift: clicks must be ordered by slot");
        prev_slot = slot;

        std::size_t j = i;
        while (j < conclusive_clicks.size() && conclusive_clicks[j].slot == slot) ++j;

        if (slot < 0 || slot >= slot_count) {
            result.out_of_range_clicks += j - i;
        } else if (j - i > 1) {
            ++result.multi_click_slots;
        } else {
            const auto& click = conclusive_clicks[i];
            if (click.channel != 0 && click.channel != 1)
                throw std::invalid_argument("sift: channel must be 0 or 1");
            result.alice.bits.push_back(alice_bits[static_cast<std::size_t>(slot)]);
            result.alice.source_slots.push_back(slot);
            result.bob.bits.push_back(static_cast<std::uint8_t>(click.channel));
            result.bob.source_slots.push_back(slot);
            result.retained_clicks.push_back(i);
        }
        i = j;
    }
    return result;
}

QberSample measure_qber(const Bits& alice, const Bits& bob,
                        double sample_fraction, RandomStream& rng) {
    if (alice.size() != bob.size())
        throw std::invalid_argument("measure_qber: key lengths differ");
    if (!(sample_fraction >= 0.0) || sample_fraction > 1.0)
        throw std::invalid_argument("measure_qber: sample_fraction must lie in [0, 1]");

    std::size_t n = alice.size();
    auto sample_size = static_cast<std::size_t>(
        std::ceil(sample_fraction * static_cast<double>(n)));
    if (sample_size > n) sample_size = n;

    QberSample sample;
    if (sample_size == 0) {
        sample.alice_remaining = alice;
        sample.bob_remaining = bob;
        return sample;
    }

    // Draw sample_size distinct positions with a partial Fisher-Yates pass.
    std::vector<std::uint32_t> order(n);
    for (std::size_t k = 0; k < n; ++k) order[k] = static_cast<std::uint32_t>(k);
    std::vector<bool> sampled(n, false);
    for (std::size_t k = 0; k < sample_size; ++k) {
        std::size_t pick = k + static_cast<std::size_t>(rng.index(n - k));
        std::swap(order[k], order[pick]);
        sampled[order[k]] = true;
    }

    sample.compared_bits = sample_size;
    sample.alice_remaining.reserve(n - sample_size);
    sample.bob_remaining.reserve(n - sample_size);
    for (std::size_t k = 0; k < n; ++k) {
        if (sampled[k]) {
            if (alice[k] != bob[k]) ++sample.errors;
        } else {
            sample.alice_remaining.push_back(alice[k]);
            sample.bob_remaining.push_back(bob[k]);
        }
    }
    sample.qber = static_cast<double>(sample.errors) /
                  static_cast<double>(sample.compared_bits);
    return sample;
}

} // namespace qkdsim
