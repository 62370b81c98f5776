#pragma once

#include "qkdsim/polarization.hpp"

namespace qkdsim {

/// Lumped description of the optical path from the transmitter to one
/// receiver: fiber, optional splitter port, optional extra attenuation
/// standing in for fiber (no dispersion), polarization-dependent loss and the
/// receiver's internal excess loss.
struct LinkPath {
    double fiber_length_km = 4.2;
    double fiber_loss_db_per_km = 2.1;   // multimode fiber near 850 nm
    double splitter_loss_db = 0.0;       // insertion loss of a splitter port, if any
    double lumped_attenuation_db = 0.0;  // distance-equivalent attenuation, no dispersion
    double pdl_db = 0.0;                 // polarization-dependent loss magnitude
    double pdl_axis = 0.0;               // low-loss axis, radians
    double receiver_excess_loss_db = 3.0;
    double dispersion_ps_per_nm_km = 85.0;

    void validate() const;

    /// A path with every loss and length zeroed; useful as a neutral element
    /// for concatenation.
    static LinkPath none();
};

/// Result of propagating the signal pair through a path.
struct LinkBudget {
    /// Mean power transmittance including the state-averaged PDL loss.
    double transmittance = 1.0;
    /// Transmittance of the polarization-independent losses only; combine
    /// with the per-state effective amplitudes for state-resolved rates.
    double transmittance_excl_pdl = 1.0;
    /// Gaussian timing spread added by chromatic dispersion (seconds).
    double added_sigma_s = 0.0;
    /// Signal states after PDL: rotated angles, reduced amplitudes.
    StatePair effective_state_pair{};
};

/// Evaluates the loss budget and state distortion of `path` for the given
/// input pair and source spectral width.
LinkBudget compute_budget(const LinkPath& path, const StatePair& pair,
                          double linewidth_nm);

/// Concatenates two path segments: lengths and decibel losses add. Both
/// segments carrying PDL is only supported for a common axis; fiber
/// parameters must agree when both segments contain fiber.
LinkPath concatenate(const LinkPath& a, const LinkPath& b);

} // namespace qkdsim
