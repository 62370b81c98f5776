#include "qkdsim/source.hpp"

#include <cmath>
#include <stdexcept>

namespace qkdsim {

void SourceConfig::validate() const {
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw std::invalid_argument("source.mu must be finite and > 0");
    if (!(pulse_fwhm_s >= 0.0) || !std::isfinite(pulse_fwhm_s))
        throw std::invalid_argument("source.pulse_fwhm_s must be finite and >= 0");
    if (!(clock_hz > 0.0) || !std::isfinite(clock_hz))
        throw std::invalid_argument("source.clock_hz must be finite and > 0");
    if (!(wavelength_nm > 0.0))
        throw std::invalid_argument("source.wavelength_nm must be > 0");
    if (!(linewidth_nm >= 0.0) || !std::isfinite(linewidth_nm))
        throw std::invalid_argument("source.linewidth_nm must be finite and >= 0");
}

std::uint64_t sample_photon_number(double mu, RandomStream& rng) {
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw std::invalid_argument("mu must be finite and > 0");
    return rng.poisson(mu);
}

double photon_number_pmf(double mu, std::uint64_t n) {
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw std::invalid_argument("mu must be finite and > 0");
    double log_p = -mu + static_cast<double>(n) * std::log(mu) -
                   std::lgamma(static_cast<double>(n) + 1.0);
    return std::exp(log_p);
}

double multi_photon_probability(double mu) {
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw std::invalid_argument("mu must be finite and > 0");
    return 1.0 - std::exp(-mu) * (1.0 + mu);
}

Bits generate_bitstream(std::uint64_t length, RandomStream& rng) {
    Bits bits(length);
    for (auto& b : bits) b = rng.bit();
    return bits;
}

EmittedPulse emit_pulse(const SourceConfig& cfg, const StatePair& pair,
                        std::uint64_t slot, RandomStream& rng) {
    cfg.validate();
    EmittedPulse pulse;
    pulse.slot = slot;
    pulse.bit = rng.bit();
    pulse.photon_count = rng.poisson(cfg.mu);
    pulse.state = pulse.bit ? pair.state1 : pair.state0;
    return pulse;
}

} // namespace qkdsim
