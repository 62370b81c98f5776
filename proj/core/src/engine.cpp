#include "qkdsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace qkdsim {

namespace {

constexpr std::uint64_t kMaxMonteCarloSlots = 200'000'000ULL;
constexpr std::uint64_t kPostprocessStreamTag = 0x504F5354ULL;
constexpr std::uint64_t kDigestBits = 64;

} // namespace

void PostprocessConfig::validate() const {
    if (!(reconciliation_efficiency >= 0.0) || !std::isfinite(reconciliation_efficiency))
        throw std::invalid_argument(
            "postprocessing.reconciliation_efficiency must be finite and >= 0");
    if (!(pa_margin >= 0.0) || pa_margin >= 1.0)
        throw std::invalid_argument("postprocessing.pa_margin must lie in [0, 1)");
    if (!(sample_fraction >= 0.0) || sample_fraction > 1.0)
        throw std::invalid_argument("postprocessing.sample_fraction must lie in [0, 1]");
    try {
        cascade.validate();
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("postprocessing.") + e.what());
    }
}

std::uint64_t ScenarioConfig::resolved_slot_count() const {
    if (slot_count > 0) return slot_count;
    double derived = duration_s * source.clock_hz;
    if (!(derived >= 0.5))
        throw std::invalid_argument(
            "slot count resolves to zero; set duration_s or slot_count");
    if (derived > 1e15)
        throw std::invalid_argument("slot count exceeds the supported range");
    return static_cast<std::uint64_t>(std::llround(derived));
}

void ScenarioConfig::validate() const {
    source.validate();
    path.validate();
    receiver.validate();
    postprocessing.validate();
    try {
        detectors.channel0.validate();
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("detectors.channel0: ") + e.what());
    }
    try {
        detectors.channel1.validate();
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("detectors.channel1: ") + e.what());
    }
    if (slot_count == 0 && (!(duration_s > 0.0) || !std::isfinite(duration_s)))
        throw std::invalid_argument("duration_s must be finite and > 0 when slot_count is not set");
    resolved_slot_count();
}

namespace {

/// Per-channel numbers shared by the analytic and Monte-Carlo paths.  All
/// intensities are per slot; [s] indexes the transmitted bit.
struct ChannelPlan {
    bool active = false;
    /// Detected photons per slot of state s, before gating and dead time.
    double detect_mean[2] = {0.0, 0.0};
    /// Total click-timing spread: detector response, source pulse width and
    /// fiber dispersion in quadrature.
    double sigma_s = 0.0;
    double shift_s = 0.0;
    /// Probability a signal click lands inside any accepted window / inside
    /// the emitting slot's own window.
    double accept_any = 1.0;
    double accept_own = 1.0;
    /// Dead-time throughput on gated clicks.
    double rho = 1.0;
    /// Per-slot click intensities after gating and dead time.
    double in_slot[2] = {0.0, 0.0};
    double leaked = 0.0;
    double dark_eff = 0.0;
    double total[2] = {0.0, 0.0};
};

struct RunPlan {
    std::uint64_t slots = 0;
    double slot_duration_s = 0.0;
    double duration_s = 0.0;
    double mu_arrival[2] = {0.0, 0.0};
    PolarizationState state[2];
    double eve_fraction = 0.0;
    ChannelPlan channel[2];
};

RunPlan make_plan(const ScenarioConfig& config) {
    RunPlan plan;
    plan.slots = config.resolved_slot_count();
    double f = config.source.clock_hz;
    plan.slot_duration_s = 1.0 / f;
    plan.duration_s = static_cast<double>(plan.slots) * plan.slot_duration_s;

    LinkBudget budget =
        compute_budget(config.path, StatePair::b92_default(), config.source.linewidth_nm);

    for (int s = 0; s < 2; ++s) {
        const PolarizationState& st = s == 0 ? budget.effective_state_pair.state0
                                             : budget.effective_state_pair.state1;
        double amp2 = st.relative_amplitude * st.relative_amplitude;
        plan.mu_arrival[s] = config.source.mu * budget.transmittance_excl_pdl * amp2;
        plan.state[s] = make_linear_state(st.angle);
    }
    plan.eve_fraction = eve_information_bound(budget.effective_state_pair.relative_angle());

    double sigma_pulse = sigma_from_fwhm(config.source.pulse_fwhm_s);
    double window = config.receiver.window_fraction;
    double T = plan.slot_duration_s;

    for (int c = 0; c < 2; ++c) {
        ChannelPlan& ch = plan.channel[c];
        const DetectorModel& model =
            c == 0 ? config.detectors.channel0 : config.detectors.channel1;
        // A channel with zero efficiency models a switched-off detector and
        // contributes nothing, dark counts included.
        ch.active = model.efficiency > 0.0;
        if (!ch.active) continue;

        for (int s = 0; s < 2; ++s)
            ch.detect_mean[s] = plan.mu_arrival[s] *
                                channel_routing_probability(config.receiver, c) *
                                analyzer_pass_probability(plan.state[s], config.receiver, c) *
                                model.efficiency;
        double mean_detect = 0.5 * (ch.detect_mean[0] + ch.detect_mean[1]);

        // The response tables are indexed by the avalanche rate the detector
        // itself sustains, i.e. before any downstream time gating.
        double candidate_rate = f * mean_detect + model.dark_rate_hz;
        double table_rate = dead_time_throughput(candidate_rate, model.dead_time_s);
        double jitter_sigma = sigma_from_fwhm(jitter_at_rate(model, table_rate));
        ch.shift_s = shift_at_rate(model, table_rate);
        ch.sigma_s = std::sqrt(jitter_sigma * jitter_sigma + sigma_pulse * sigma_pulse +
                               budget.added_sigma_s * budget.added_sigma_s);

        ch.accept_any = total_capture_probability(ch.sigma_s, ch.shift_s, T, window);
        ch.accept_own = window_capture_probability(ch.sigma_s, ch.shift_s, T, window, 0);

        double gated_rate = f * mean_detect * ch.accept_any + model.dark_rate_hz * window;
        ch.rho = 1.0 / (1.0 + gated_rate * model.dead_time_s);

        for (int s = 0; s < 2; ++s) ch.in_slot[s] = ch.detect_mean[s] * ch.accept_own * ch.rho;
        // Clicks leaking out of their slot are balanced by clicks leaking in
        // from neighbours, whose transmitted bits are independent.
        ch.leaked = mean_detect * (ch.accept_any - ch.accept_own) * ch.rho;
        ch.dark_eff = model.dark_rate_hz / f * window * ch.rho;
        for (int s = 0; s < 2; ++s) ch.total[s] = ch.in_slot[s] + ch.leaked + ch.dark_eff;
    }
    return plan;
}

void attach_key_rate(const ScenarioConfig& config, const RunPlan& plan, LinkMetrics& m) {
    if (m.insufficient_data) {
        m.nbr_hz = 0.0;
        return;
    }
    KeyRateInputs inputs;
    inputs.sifted_rate_hz = m.sifted_rate_hz;
    inputs.qber = m.qber;
    inputs.eve_fraction = plan.eve_fraction;
    inputs.reconciliation_efficiency = config.postprocessing.reconciliation_efficiency;
    inputs.pa_margin = config.postprocessing.pa_margin;
    m.nbr_hz = net_bit_rate(inputs);
}

LinkMetrics analytic_metrics(const ScenarioConfig& config, const RunPlan& plan) {
    double click_prob[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    for (int c = 0; c < 2; ++c)
        for (int s = 0; s < 2; ++s)
            if (plan.channel[c].active)
                click_prob[c][s] = 1.0 - std::exp(-plan.channel[c].total[s]);

    double raw = 0.0, sifted = 0.0, errors = 0.0;
    double signal = 0.0, dark = 0.0, misallocated = 0.0;
    for (int s = 0; s < 2; ++s) {
        for (int c = 0; c < 2; ++c) {
            double p = click_prob[c][s];
            raw += 0.5 * p;
            double conclusive = 0.5 * p * (1.0 - click_prob[1 - c][s]);
            sifted += conclusive;
            if (c != s) errors += conclusive;

            const ChannelPlan& ch = plan.channel[c];
            if (!ch.active || ch.total[s] <= 0.0) continue;
            signal += conclusive * (ch.in_slot[s] / ch.total[s]);
            misallocated += conclusive * (ch.leaked / ch.total[s]);
            dark += conclusive * (ch.dark_eff / ch.total[s]);
        }
    }

    LinkMetrics m;
    double f = config.source.clock_hz;
    auto slots = static_cast<double>(plan.slots);
    m.raw_click_rate_hz = raw * f;
    m.conclusive_rate_hz = sifted * f;
    m.sifted_rate_hz = sifted * f;
    m.sifted_bits = sifted * slots;
    m.signal_counts = signal * slots;
    m.dark_counts = dark * slots;
    m.misallocated_counts = misallocated * slots;
    if (sifted > 0.0) {
        m.qber = errors / sifted;
    } else {
        m.insufficient_data = true;
    }
    attach_key_rate(config, plan, m);
    return m;
}

double click_time(const DetectionRecord& r, double slot_duration_s) {
    return (static_cast<double>(r.slot) + 0.5) * slot_duration_s + r.offset_s;
}

RunResult run_monte_carlo(const ScenarioConfig& config, const RunPlan& plan) {
    if (plan.slots > kMaxMonteCarloSlots)
        throw std::runtime_error("monte_carlo mode supports at most 2e8 slots per run");

    RandomStream rng(config.seed);
    double T = plan.slot_duration_s;
    double half_window = 0.5 * config.receiver.window_fraction * T;
    double eff0 = config.detectors.channel0.efficiency;
    double eff1 = config.detectors.channel1.efficiency;
    double no_photon[2] = {std::exp(-plan.mu_arrival[0]), std::exp(-plan.mu_arrival[1])};

    Bits alice(plan.slots, 0);
    std::vector<DetectionRecord> clicks;

    for (std::uint64_t slot = 0; slot < plan.slots; ++slot) {
        auto bit = static_cast<std::uint8_t>(rng.bit());
        alice[slot] = bit;

        // Thinned photon-number draw: arrivals after propagation loss stay
        // Poisson, so the lossy channel collapses into the mean.
        std::uint64_t photons = 0;
        double prod = rng.uniform();
        while (prod > no_photon[bit]) {
            ++photons;
            prod *= rng.uniform();
        }

        for (std::uint64_t p = 0; p < photons; ++p) {
            MeasurementOutcome outcome =
                measure_pulse(plan.state[bit], config.receiver, rng, eff0, eff1);
            int channel;
            if (outcome == MeasurementOutcome::conclusive_0) channel = 0;
            else if (outcome == MeasurementOutcome::conclusive_1) channel = 1;
            else continue;

            const ChannelPlan& ch = plan.channel[channel];
            double offset = rng.normal(ch.shift_s, ch.sigma_s);
            auto [registered, residual] =
                registered_slot(offset, static_cast<std::int64_t>(slot), T);
            if (std::fabs(residual) > half_window) continue;
            clicks.push_back({registered, static_cast<std::int64_t>(slot), channel, residual});
        }
    }

    for (int c = 0; c < 2; ++c) {
        if (!plan.channel[c].active) continue;
        const DetectorModel& model =
            c == 0 ? config.detectors.channel0 : config.detectors.channel1;
        for (const auto& d : dark_clicks(model.dark_rate_hz, plan.duration_s, T, rng, c))
            if (std::fabs(d.offset_s) <= half_window) clicks.push_back(d);
    }

    auto earlier = [T](const DetectionRecord& a, const DetectionRecord& b) {
        return click_time(a, T) < click_time(b, T);
    };
    std::stable_sort(clicks.begin(), clicks.end(), earlier);

    std::vector<DetectionRecord> per_channel[2];
    for (const auto& r : clicks) per_channel[r.channel].push_back(r);
    auto kept0 = apply_dead_time(per_channel[0], config.detectors.channel0.dead_time_s, T);
    auto kept1 = apply_dead_time(per_channel[1], config.detectors.channel1.dead_time_s, T);
    std::vector<DetectionRecord> kept;
    kept.reserve(kept0.size() + kept1.size());
    std::merge(kept0.begin(), kept0.end(), kept1.begin(), kept1.end(),
               std::back_inserter(kept), earlier);

    std::uint64_t conclusive_events = 0;
    for (std::size_t i = 0; i < kept.size();) {
        std::size_t j = i;
        while (j < kept.size() && kept[j].slot == kept[i].slot) ++j;
        if (j - i == 1) ++conclusive_events;
        i = j;
    }

    SiftResult sifted = sift(alice, kept);

    RunResult result;
    std::uint64_t errors = 0, signal = 0, dark = 0, misallocated = 0;
    for (std::size_t k = 0; k < sifted.alice.bits.size(); ++k) {
        if (sifted.alice.bits[k] != sifted.bob.bits[k]) ++errors;
        const auto& rec = kept[sifted.retained_clicks[k]];
        if (rec.true_slot < 0) ++dark;
        else if (rec.true_slot == rec.slot) ++signal;
        else ++misallocated;
    }

    LinkMetrics& m = result.metrics;
    auto sifted_count = static_cast<std::uint64_t>(sifted.alice.bits.size());
    m.raw_click_rate_hz = static_cast<double>(kept.size()) / plan.duration_s;
    m.conclusive_rate_hz = static_cast<double>(conclusive_events) / plan.duration_s;
    m.sifted_rate_hz = static_cast<double>(sifted_count) / plan.duration_s;
    m.sifted_bits = static_cast<double>(sifted_count);
    m.signal_counts = static_cast<double>(signal);
    m.dark_counts = static_cast<double>(dark);
    m.misallocated_counts = static_cast<double>(misallocated);
    if (sifted_count > 0) {
        m.qber = static_cast<double>(errors) / static_cast<double>(sifted_count);
    } else {
        m.insufficient_data = true;
    }
    attach_key_rate(config, plan, m);

    result.alice_key = std::move(sifted.alice.bits);
    result.bob_key = std::move(sifted.bob.bits);
    return result;
}

} // namespace

RunResult run_link_detailed(const ScenarioConfig& config) {
    config.validate();
    RunPlan plan = make_plan(config);
    if (config.mode == SimMode::analytic) {
        RunResult result;
        result.metrics = analytic_metrics(config, plan);
        return result;
    }
    return run_monte_carlo(config, plan);
}

LinkMetrics run_link(const ScenarioConfig& config) {
    return run_link_detailed(config).metrics;
}

void NetworkTopology::validate() const {
    if (port_count < 1)
        throw std::invalid_argument("network.port_count must be >= 1");
    if (active_ports.empty() ||
        active_ports.size() > static_cast<std::size_t>(port_count))
        throw std::invalid_argument(
            "network.active_ports must hold between 1 and port_count entries");
    shared_upstream.validate();
    std::set<int> seen;
    for (const auto& port : active_ports) {
        if (port.port_id < 0 || port.port_id >= port_count)
            throw std::invalid_argument("network.active_ports: port_id out of range");
        if (!seen.insert(port.port_id).second)
            throw std::invalid_argument("network.active_ports: duplicate port_id");
        port.drop_path.validate();
    }
}

std::vector<std::pair<int, LinkMetrics>> run_network(const NetworkTopology& topology,
                                                     const ScenarioConfig& base) {
    topology.validate();
    std::vector<std::pair<int, LinkMetrics>> results;
    results.reserve(topology.active_ports.size());
    for (const auto& port : topology.active_ports) {
        ScenarioConfig config = base;
        config.path = concatenate(topology.shared_upstream, port.drop_path);
        config.seed =
            derive_substream_seed(base.seed, static_cast<std::uint64_t>(port.port_id));
        results.emplace_back(port.port_id, run_link(config));
    }
    return results;
}

SweepParameter sweep_parameter_from_string(std::string_view name) {
    if (name == "clock_hz") return SweepParameter::clock_hz;
    if (name == "fiber_length_km") return SweepParameter::fiber_length_km;
    if (name == "attenuation_equivalent_db")
        return SweepParameter::attenuation_equivalent_db;
    throw std::invalid_argument("unknown sweep parameter: " + std::string(name));
}

std::string_view to_string(SweepParameter parameter) {
    switch (parameter) {
        case SweepParameter::clock_hz: return "clock_hz";
        case SweepParameter::fiber_length_km: return "fiber_length_km";
        case SweepParameter::attenuation_equivalent_db:
            return "attenuation_equivalent_db";
    }
    throw std::invalid_argument("unknown sweep parameter");
}

std::vector<std::pair<double, LinkMetrics>> sweep(SweepParameter parameter,
                                                  const std::vector<double>& values,
                                                  const ScenarioConfig& base) {
    if (values.empty()) throw std::invalid_argument("sweep requires at least one value");
    std::vector<std::pair<double, LinkMetrics>> results;
    results.reserve(values.size());
    for (double value : values) {
        ScenarioConfig config = base;
        switch (parameter) {
            case SweepParameter::clock_hz:
                config.source.clock_hz = value;
                break;
            case SweepParameter::fiber_length_km:
                config.path.fiber_length_km = value;
                break;
            case SweepParameter::attenuation_equivalent_db:
                config.path.fiber_length_km = 0.0;
                config.path.lumped_attenuation_db = value;
                break;
        }
        results.emplace_back(value, run_link(config));
    }
    return results;
}

DistilledKey distill_key(const ScenarioConfig& config) {
    ScenarioConfig mc = config;
    mc.mode = SimMode::monte_carlo;
    RunResult run = run_link_detailed(mc);

    DistilledKey out;
    out.metrics = run.metrics;
    out.sifted_bits = run.alice_key.size();

    RandomStream post(derive_substream_seed(mc.seed, kPostprocessStreamTag));

    Bits alice = std::move(run.alice_key);
    Bits bob = std::move(run.bob_key);
    double fraction = mc.postprocessing.sample_fraction;
    if (fraction >= 1.0) {
        // Estimate on the whole key without discarding it.
        std::uint64_t mismatches = 0;
        for (std::size_t i = 0; i < alice.size(); ++i)
            if (alice[i] != bob[i]) ++mismatches;
        out.compared_bits = alice.size();
        out.measured_qber = alice.empty() ? 0.0
                                          : static_cast<double>(mismatches) /
                                                static_cast<double>(alice.size());
    } else {
        QberSample sample = measure_qber(alice, bob, fraction, post);
        out.compared_bits = sample.compared_bits;
        out.measured_qber = sample.qber;
        alice = std::move(sample.alice_remaining);
        bob = std::move(sample.bob_remaining);
    }
    out.reconciled_bits = alice.size();

    // Guard the block sizing against a lucky all-match sample; without any
    // comparison at all, assume the worst.
    double hint = out.measured_qber;
    if (out.compared_bits == 0) hint = 0.5;
    else if (hint <= 0.0) hint = 0.5 / static_cast<double>(out.compared_bits);

    ReconciliationResult rec =
        reconcile(alice, bob, std::min(hint, 1.0), mc.postprocessing.cascade, post);
    out.disclosed_bits = rec.disclosed_bits;
    out.converged = rec.converged;
    if (!rec.converged) return out;

    RunPlan plan = make_plan(mc);
    double allowance = plan.eve_fraction + mc.postprocessing.pa_margin;
    auto n = static_cast<std::uint64_t>(alice.size());
    auto allowance_bits =
        static_cast<std::uint64_t>(std::ceil(allowance * static_cast<double>(n)));
    std::uint64_t overhead = rec.disclosed_bits + kDigestBits + allowance_bits;
    out.final_bits = n > overhead ? n - overhead : 0;

    if (out.final_bits > 0) {
        Bits toeplitz_seed(alice.size() + out.final_bits - 1, 0);
        for (auto& b : toeplitz_seed) b = static_cast<std::uint8_t>(post.bit());
        out.key = privacy_amplify(rec.corrected, toeplitz_seed,
                                  static_cast<std::size_t>(out.final_bits));
    }
    return out;
}

} // namespace qkdsim
