#pragma once

namespace qkdsim {

/// Linear polarization state of a single optical pulse.
///
/// `angle` is the polarization plane in radians, folded into [0, pi) since a
/// linear state is invariant under a half turn. `relative_amplitude` scales
/// the field amplitude relative to an unattenuated pulse, so detection
/// probabilities pick up a factor relative_amplitude^2.
struct PolarizationState {
    double angle = 0.0;
    double relative_amplitude = 1.0;
};

/// The two signal states of the protocol. The default pair is 0 and pi/4,
/// i.e. a 45 degree relative angle with equal amplitudes.
struct StatePair {
    PolarizationState state0{};
    PolarizationState state1{};

    static StatePair b92_default();

    /// Relative angle between the two states, folded into [0, pi/2].
    double relative_angle() const;
};

/// Folds an arbitrary angle into [0, pi).
double normalize_polarization_angle(double angle);

/// Validating constructor; normalizes the angle and rejects amplitudes
/// outside (0, 1].
PolarizationState make_linear_state(double angle, double relative_amplitude = 1.0);

/// Malus-law probability of passing an ideal analyzer at `analyzer_angle`:
/// cos^2(angle - analyzer_angle) * relative_amplitude^2.
double projection_probability(const PolarizationState& state, double analyzer_angle);

/// Applies a polarization-dependent loss element of `pdl_db` decibels whose
/// low-loss axis sits at `pdl_axis`. The amplitude component perpendicular to
/// the axis is attenuated by 10^(-pdl_db/20); the state angle rotates toward
/// the axis and the amplitude shrinks accordingly.
PolarizationState apply_pdl(const PolarizationState& state, double pdl_db, double pdl_axis);

/// Fraction of conclusive events an eavesdropper limited to unambiguous state
/// discrimination can obtain from a pair of pure states `relative_angle`
/// apart: 1 - cos(relative_angle). 0 for identical states, 1 for orthogonal.
double eve_information_bound(double relative_angle);

} // namespace qkdsim
