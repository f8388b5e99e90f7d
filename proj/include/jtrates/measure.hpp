#pragma once

#include <cmath>
#include <stdexcept>

#include "jtrates/model.hpp"

namespace jtrates {

/// Map a physical-measure model to its risk-neutral dynamics: intensities
/// scale by theta_i, the drift picks up sigma_i * psi_i (carried through
/// ModelSpec::drift on the Q tag), jump sizes are unchanged.
inline ModelSpec to_risk_neutral(const ModelSpec& model) {
    model.validate();
    if (model.measure == MeasureTag::RiskNeutral)
        throw std::logic_error("to_risk_neutral: model is already risk-neutral");
    ModelSpec q = model;
    q.lambda0 = model.measure_params.theta0 * model.lambda0;
    q.lambda1 = model.measure_params.theta1 * model.lambda1;
    q.measure = MeasureTag::RiskNeutral;
    return q;
}

/// Pathwise Radon-Nikodym density L_T = L_T^psi * L_T^theta for a path
/// simulated under the physical measure. The regime integrals are exact over
/// the piecewise-constant segments.
inline double radon_nikodym_on_path(const MeasureParams& mp, const ModelSpec& model,
                                    const RatePath& path) {
    mp.validate();
    model.validate();
    if (path.times.empty())
        throw std::invalid_argument("radon_nikodym_on_path: empty path");
    if (model.diffusive() && path.wiener.size() != path.times.size() - 1)
        throw std::invalid_argument(
            "radon_nikodym_on_path: diffusive model requires stored Wiener increments");

    double log_l = 0.0;
    for (std::size_t k = 0; k + 1 < path.times.size(); ++k) {
        const int i = path.regimes[k];
        const double len = path.times[k + 1] - path.times[k];
        log_l += (1.0 - mp.theta(i)) * model.lambda(i) * len;
        if (model.diffusive()) {
            const double psi = mp.psi(i);
            // sign chosen so that E_P[L g] = E_Q[g] with Q-drift mu + sigma*psi
            log_l += psi * path.wiener[k] - 0.5 * psi * psi * len;
        }
    }
    for (std::size_t node : path.switch_nodes) {
        const int pre = path.regimes[node - 1];
        log_l += std::log(mp.theta(pre));
    }
    return std::exp(log_l);
}

} // namespace jtrates
