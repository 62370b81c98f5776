#include "qkdsim/link.hpp"

#include <cmath>
#include <stdexcept>

namespace qkdsim {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

} // namespace

void LinkPath::validate() const {
    require(fiber_length_km >= 0.0 && std::isfinite(fiber_length_km),
            "path.fiber_length_km must be finite and >= 0");
    require(fiber_loss_db_per_km >= 0.0 && std::isfinite(fiber_loss_db_per_km),
            "path.fiber_loss_db_per_km must be finite and >= 0");
    require(splitter_loss_db >= 0.0 && std::isfinite(splitter_loss_db),
            "path.splitter_loss_db must be finite and >= 0");
    require(lumped_attenuation_db >= 0.0 && std::isfinite(lumped_attenuation_db),
            "path.lumped_attenuation_db must be finite and >= 0");
    require(pdl_db >= 0.0 && std::isfinite(pdl_db),
            "path.pdl_db must be finite and >= 0");
    require(std::isfinite(pdl_axis), "path.pdl_axis must be finite");
    require(receiver_excess_loss_db >= 0.0 && std::isfinite(receiver_excess_loss_db),
            "path.receiver_excess_loss_db must be finite and >= 0");
    require(dispersion_ps_per_nm_km >= 0.0 && std::isfinite(dispersion_ps_per_nm_km),
            "path.dispersion_ps_per_nm_km must be finite and >= 0");
}

LinkPath LinkPath::none() {
    LinkPath p;
    p.fiber_length_km = 0.0;
    p.fiber_loss_db_per_km = 0.0;
    p.splitter_loss_db = 0.0;
    p.lumped_attenuation_db = 0.0;
    p.pdl_db = 0.0;
    p.pdl_axis = 0.0;
    p.receiver_excess_loss_db = 0.0;
    p.dispersion_ps_per_nm_km = 0.0;
    return p;
}

LinkBudget compute_budget(const LinkPath& path, const StatePair& pair,
                          double linewidth_nm) {
    path.validate();
    require(linewidth_nm >= 0.0 && std::isfinite(linewidth_nm),
            "linewidth_nm must be finite and >= 0");

    double total_db = path.fiber_length_km * path.fiber_loss_db_per_km +
                      path.splitter_loss_db + path.lumped_attenuation_db +
                      path.receiver_excess_loss_db;

    LinkBudget budget;
    budget.transmittance_excl_pdl = std::pow(10.0, -total_db / 10.0);
    budget.effective_state_pair.state0 = apply_pdl(pair.state0, path.pdl_db, path.pdl_axis);
    budget.effective_state_pair.state1 = apply_pdl(pair.state1, path.pdl_db, path.pdl_axis);

    // The reported transmittance folds in the PDL loss averaged over the two
    // states (transmitted with equal probability).
    auto power = [](const PolarizationState& s) {
        return s.relative_amplitude * s.relative_amplitude;
    };
    double pdl_factor =
        0.5 * (power(budget.effective_state_pair.state0) / power(pair.state0) +
               power(budget.effective_state_pair.state1) / power(pair.state1));
    budget.transmittance = budget.transmittance_excl_pdl * pdl_factor;

    budget.added_sigma_s = path.dispersion_ps_per_nm_km * 1e-12 * linewidth_nm *
                           path.fiber_length_km;
    return budget;
}

LinkPath concatenate(const LinkPath& a, const LinkPath& b) {
    a.validate();
    b.validate();

    LinkPath out = a;
    out.fiber_length_km = a.fiber_length_km + b.fiber_length_km;
    out.splitter_loss_db = a.splitter_loss_db + b.splitter_loss_db;
    out.lumped_attenuation_db = a.lumped_attenuation_db + b.lumped_attenuation_db;
    out.receiver_excess_loss_db = a.receiver_excess_loss_db + b.receiver_excess_loss_db;

    if (a.fiber_length_km > 0.0 && b.fiber_length_km > 0.0) {
        if (a.fiber_loss_db_per_km != b.fiber_loss_db_per_km ||
            a.dispersion_ps_per_nm_km != b.dispersion_ps_per_nm_km)
            throw std::invalid_argument(
                "concatenate: fiber segments with different per-km parameters");
    } else if (b.fiber_length_km > 0.0) {
        out.fiber_loss_db_per_km = b.fiber_loss_db_per_km;
        out.dispersion_ps_per_nm_km = b.dispersion_ps_per_nm_km;
    }

    if (a.pdl_db > 0.0 && b.pdl_db > 0.0 &&
        normalize_polarization_angle(a.pdl_axis) !=
            normalize_polarization_angle(b.pdl_axis))
        throw std::invalid_argument(
            "concatenate: PDL on both segments requires a common axis");
    out.pdl_db = a.pdl_db + b.pdl_db;
    out.pdl_axis = a.pdl_db > 0.0 ? a.pdl_axis : b.pdl_axis;

    return out;
}

} // namespace qkdsim
