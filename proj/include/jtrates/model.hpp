#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "jtrates/rng.hpp"
#include "jtrates/telegraph.hpp"

namespace jtrates {

enum class ModelKind { JtMerton, JtDothan, JtdMerton, JtdDothan };
enum class MeasureTag { Physical, RiskNeutral };

inline bool is_dothan(ModelKind k) {
    return k == ModelKind::JtDothan || k == ModelKind::JtdDothan;
}
inline bool is_diffusive(ModelKind k) {
    return k == ModelKind::JtdMerton || k == ModelKind::JtdDothan;
}

inline std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::JtMerton: return "jt_merton";
        case ModelKind::JtDothan: return "jt_dothan";
        case ModelKind::JtdMerton: return "jtd_merton";
        case ModelKind::JtdDothan: return "jtd_dothan";
    }
    return "?";
}

/// Jump-intensity multipliers theta_i and market prices of diffusion risk
/// psi_i of the equivalent-measure change.
struct MeasureParams {
    double theta0 = 1.0, theta1 = 1.0;
    double psi0 = 0.0, psi1 = 0.0;

    double theta(int i) const { return i == 0 ? theta0 : theta1; }
    double psi(int i) const { return i == 0 ? psi0 : psi1; }

    void validate() const {
        if (!(theta0 > 0.0) || !(theta1 > 0.0))
            throw std::invalid_argument("MeasureParams: theta must be positive");
        if (!std::isfinite(psi0) || !std::isfinite(psi1))
            throw std::invalid_argument("MeasureParams: psi must be finite");
    }
};

/// One of the four regime-switching short-rate models. When tagged
/// RiskNeutral, lambda_i are the risk-neutral intensities and the effective
/// drift carries the sigma*psi shift.
struct ModelSpec {
    ModelKind kind = ModelKind::JtMerton;
    double mu0 = 0.0, mu1 = 0.0;
    double sigma0 = 0.0, sigma1 = 0.0;
    double eta0 = 0.0, eta1 = 0.0;
    double lambda0 = 1.0, lambda1 = 1.0;
    MeasureTag measure = MeasureTag::RiskNeutral;
    MeasureParams measure_params{};

    double mu(int i) const { return i == 0 ? mu0 : mu1; }
    double sigma(int i) const { return i == 0 ? sigma0 : sigma1; }
    double eta(int i) const { return i == 0 ? eta0 : eta1; }
    double lambda(int i) const { return i == 0 ? lambda0 : lambda1; }

    bool dothan() const { return is_dothan(kind); }
    bool diffusive() const { return is_diffusive(kind); }

    /// Drift of the rate (absolute for Merton kinds, relative for Dothan
    /// kinds) under the tagged measure, driving the raw switch counter N.
    double drift(int i) const {
        double d = mu(i);
        if (measure == MeasureTag::RiskNeutral) d += sigma(i) * measure_params.psi(i);
        return d;
    }

    void validate() const {
        measure_params.validate();
        for (double v : {mu0, mu1, sigma0, sigma1, eta0, eta1, lambda0, lambda1})
            if (!std::isfinite(v))
                throw std::invalid_argument("ModelSpec: non-finite parameter");
        if (!(lambda0 > 0.0) || !(lambda1 > 0.0))
            throw std::invalid_argument("ModelSpec: intensities must be positive");
        if (!(sigma0 >= 0.0) || !(sigma1 >= 0.0))
            throw std::invalid_argument("ModelSpec: volatilities must be non-negative");
        if (!diffusive() && (sigma0 != 0.0 || sigma1 != 0.0))
            throw std::invalid_argument("ModelSpec: sigma must be zero for a non-diffusive kind");
        if (diffusive() && sigma0 == 0.0 && sigma1 == 0.0)
            throw std::invalid_argument("ModelSpec: diffusive kind requires a nonzero sigma");
        if (dothan() && (!(eta0 > -1.0) || !(eta1 > -1.0)))
            throw std::invalid_argument("ModelSpec: Dothan kinds require eta > -1");
    }

    /// Zero jump sizes are accepted (deterministic special cases) but fall
    /// outside the model's standing assumption.
    bool degenerate() const { return eta0 == 0.0 || eta1 == 0.0; }

    void require_risk_neutral(const char* op) const {
        if (measure != MeasureTag::RiskNeutral)
            throw std::logic_error(std::string(op) + ": model must be tagged risk-neutral");
    }
};

/// A simulated short-rate trajectory. Switch times appear twice: once closing
/// the old regime's segment (pre-jump rate) and once opening the new one
/// (post-jump rate); switch_nodes indexes the post-jump node.
struct RatePath {
    std::vector<double> times;
    std::vector<int> regimes;      // regime on [times[k], times[k+1])
    std::vector<double> rates;     // r at times[k]
    std::vector<double> integrals; // \int_0^{times[k]} r ds
    std::vector<double> wiener;    // dW over [times[k], times[k+1]); empty if sigma = 0
    std::vector<std::size_t> switch_nodes;

    double rate_end() const { return rates.back(); }
    double integral_end() const { return integrals.back(); }
    std::size_t size() const { return times.size(); }
};

/// The telegraph process whose mean/MGF reproduce the model's expected future
/// rate: Merton kinds integrate (drift, eta), Dothan kinds integrate the log
/// dynamics (drift - sigma^2/2, log(1+eta)).
inline TelegraphParams telegraph_params_for(const ModelSpec& m) {
    TelegraphParams p;
    if (m.dothan()) {
        p.c0 = m.drift(0) - 0.5 * m.sigma(0) * m.sigma(0);
        p.c1 = m.drift(1) - 0.5 * m.sigma(1) * m.sigma(1);
        p.h0 = std::log1p(m.eta0);
        p.h1 = std::log1p(m.eta1);
    } else {
        p.c0 = m.drift(0);
        p.c1 = m.drift(1);
        p.h0 = m.eta0;
        p.h1 = m.eta1;
    }
    p.lam0 = m.lambda0;
    p.lam1 = m.lambda1;
    return p;
}

namespace detail {

// \int_0^tau e^{a s} ds
inline double growth_integral(double a, double tau) {
    const double u = a * tau;
    if (std::fabs(u) < 1e-8) return tau * (1.0 + u / 2.0 + u * u / 6.0 + u * u * u / 24.0);
    return std::expm1(u) / a;
}

} // namespace detail

/// Simulate the short rate under the model's tagged measure. Non-diffusive
/// kinds are exact; diffusive kinds use exact Gaussian increments on a grid
/// refined to include every switch time, with the trapezoid rule for the
/// integrated rate. Dothan diffusion uses the exact log scheme.
inline RatePath simulate_rate(const ModelSpec& m, double r0, int i0, double horizon,
                              double step, SubstreamRng& rng) {
    m.validate();
    detail::check_regime(i0);
    detail::check_time(horizon);
    if (m.diffusive() && !(step > 0.0))
        throw std::invalid_argument("simulate_rate: step must be positive");

    RatePath path;
    path.times.push_back(0.0);
    path.regimes.push_back(i0);
    path.rates.push_back(r0);
    path.integrals.push_back(0.0);

    double t = 0.0, r = r0, integral = 0.0;
    int regime = i0;
    while (t < horizon) {
        const double hold = rng.exponential(m.lambda(regime));
        const double seg_end = std::min(t + hold, horizon);
        const bool switches = seg_end < horizon;
        const double drift = m.drift(regime);
        const double sig = m.sigma(regime);

        if (!m.diffusive()) {
            const double len = seg_end - t;
            if (m.dothan()) {
                integral += r * detail::growth_integral(drift, len);
                r *= std::exp(drift * len);
            } else {
                integral += r * len + 0.5 * drift * len * len;
                r += drift * len;
            }
            t = seg_end;
            path.times.push_back(t);
            path.regimes.push_back(regime);
            path.rates.push_back(r);
            path.integrals.push_back(integral);
        } else {
            const double len = seg_end - t;
            const std::size_t n_sub = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / step)));
            const double dt = len / static_cast<double>(n_sub);
            for (std::size_t s = 0; s < n_sub; ++s) {
                const double dw = std::sqrt(dt) * rng.normal();
                double r_next;
                if (m.dothan())
                    r_next = r * std::exp((drift - 0.5 * sig * sig) * dt + sig * dw);
                else
                    r_next = r + drift * dt + sig * dw;
                integral += 0.5 * (r + r_next) * dt;
                r = r_next;
                t += dt;
                path.wiener.push_back(dw);
                path.times.push_back(t);
                path.regimes.push_back(regime);
                path.rates.push_back(r);
                path.integrals.push_back(integral);
            }
            t = seg_end; // guard against rounding drift
            path.times.back() = t;
        }

        if (switches) {
            const double jump = m.eta(regime);
            r = m.dothan() ? r * (1.0 + jump) : r + jump;
            regime = 1 - regime;
            path.times.push_back(t);
            path.regimes.push_back(regime);
            path.rates.push_back(r);
            path.integrals.push_back(integral);
            if (m.diffusive()) path.wiener.push_back(0.0); // zero-length segment
            path.switch_nodes.push_back(path.times.size() - 1);
        }
    }
    return path;
}

/// E^Q[r_{t+tau} | r_t = r, regime i], closed form per model family.
inline double expected_future_rate(const ModelSpec& m, int i, double r, double tau) {
    m.validate();
    m.require_risk_neutral("expected_future_rate");
    detail::check_regime(i);
    detail::check_time(tau);
    if (m.kind == ModelKind::JtdDothan && m.sigma0 != m.sigma1)
        throw std::invalid_argument(
            "expected_future_rate: jtd_dothan closed form requires sigma0 == sigma1");

    const TelegraphParams p = telegraph_params_for(m);
    if (m.dothan()) {
        double value = r * mgf_jt(p, i, 1.0, tau);
        if (m.diffusive()) value *= std::exp(0.5 * m.sigma0 * m.sigma0 * tau);
        return value;
    }
    return r + mean_jt(p, i, tau);
}

} // namespace jtrates
