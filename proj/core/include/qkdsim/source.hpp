#pragma once

#include <cstdint>
#include <vector>

#include "qkdsim/polarization.hpp"
#include "qkdsim/rng.hpp"

namespace qkdsim {

using Bits = std::vector<std::uint8_t>;

/// Pulsed attenuated-laser transmitter settings.
struct SourceConfig {
    double mu = 0.1;              // mean photon number per pulse at the transmitter output
    double pulse_fwhm_s = 100e-12;
    double clock_hz = 1e9;
    double wavelength_nm = 850.0;
    double linewidth_nm = 0.15;   // spectral width feeding chromatic dispersion

    void validate() const;
};

/// One emitted pulse: the encoded bit, the sampled photon number and the
/// polarization state carrying the bit.
struct EmittedPulse {
    std::uint64_t slot = 0;
    std::uint8_t bit = 0;
    std::uint64_t photon_count = 0;
    PolarizationState state{};
};

/// Photon number of one weak coherent pulse: Poisson with mean mu.
std::uint64_t sample_photon_number(double mu, RandomStream& rng);

/// Probability that a Poisson(mu) pulse carries n photons.
double photon_number_pmf(double mu, std::uint64_t n);

/// Probability that a Poisson(mu) pulse carries at least two photons,
/// 1 - e^-mu (1 + mu); the multi-photon exposure of the source.
double multi_photon_probability(double mu);

/// Uniform random bit per slot.
Bits generate_bitstream(std::uint64_t length, RandomStream& rng);

/// Samples one full pulse for `slot`: uniform bit, Poisson photon number,
/// and the state picked from `pair` by the bit.
EmittedPulse emit_pulse(const SourceConfig& cfg, const StatePair& pair,
                        std::uint64_t slot, RandomStream& rng);

} // namespace qkdsim
