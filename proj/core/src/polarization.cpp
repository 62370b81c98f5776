#include "qkdsim/polarization.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qkdsim {

namespace {
constexpr double kPi = std::numbers::pi;
}

double normalize_polarization_angle(double angle) {
    if (!std::isfinite(angle))
        throw std::invalid_argument("polarization angle must be finite");
    double r = std::fmod(angle, kPi);
    if (r < 0.0) r += kPi;
    if (r >= kPi) r = 0.0; // guards the rounding case fmod(-eps, pi) + pi == pi
    return r;
}

PolarizationState make_linear_state(double angle, double relative_amplitude) {
    if (!(relative_amplitude > 0.0) || relative_amplitude > 1.0)
        throw std::invalid_argument("relative_amplitude must lie in (0, 1]");
    return PolarizationState{normalize_polarization_angle(angle), relative_amplitude};
}

StatePair StatePair::b92_default() {
    return StatePair{make_linear_state(0.0), make_linear_state(kPi / 4.0)};
}

double StatePair::relative_angle() const {
    double d = std::fabs(normalize_polarization_angle(state1.angle) -
                         normalize_polarization_angle(state0.angle));
    if (d > kPi / 2.0) d = kPi - d;
    return d;
}

double projection_probability(const PolarizationState& state, double analyzer_angle) {
    if (!std::isfinite(analyzer_angle))
        throw std::invalid_argument("analyzer angle must be finite");
    double c = std::cos(state.angle - analyzer_angle);
    return c * c * state.relative_amplitude * state.relative_amplitude;
}

PolarizationState apply_pdl(const PolarizationState& state, double pdl_db, double pdl_axis) {
    if (!(pdl_db >= 0.0) || !std::isfinite(pdl_db))
        throw std::invalid_argument("pdl_db must be finite and >= 0");
    if (pdl_db == 0.0)
        return PolarizationState{normalize_polarization_angle(state.angle),
                                 state.relative_amplitude};

    // Amplitude attenuation of the high-loss (perpendicular) component.
    double g = std::pow(10.0, -pdl_db / 20.0);
    double delta = state.angle - normalize_polarization_angle(pdl_axis);
    double along = std::cos(delta);
    double across = g * std::sin(delta);

    PolarizationState out;
    out.angle = normalize_polarization_angle(std::atan2(across, along) + pdl_axis);
    out.relative_amplitude =
        state.relative_amplitude * std::sqrt(along * along + across * across);
    return out;
}

double eve_information_bound(double relative_angle) {
    if (!(relative_angle >= 0.0) || relative_angle > kPi / 2.0 + 1e-12)
        throw std::invalid_argument("relative_angle must lie in [0, pi/2]");
    return 1.0 - std::cos(relative_angle);
}

} // namespace qkdsim
