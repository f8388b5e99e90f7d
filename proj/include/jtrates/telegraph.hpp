#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "jtrates/rng.hpp"
#include "jtrates/stats.hpp"

namespace jtrates {

/// Parameters of the two-state jump-telegraph process: per-regime drift c_i,
/// jump size h_i applied when leaving regime i, and switching intensity
/// lambda_i of the exponential holding time in regime i.
struct TelegraphParams {
    double c0 = 0.0, c1 = 0.0;
    double h0 = 0.0, h1 = 0.0;
    double lam0 = 1.0, lam1 = 1.0;

    double drift(int i) const { return i == 0 ? c0 : c1; }
    double jump(int i) const { return i == 0 ? h0 : h1; }
    double intensity(int i) const { return i == 0 ? lam0 : lam1; }

    void validate() const {
        if (!(std::isfinite(c0) && std::isfinite(c1) && std::isfinite(h0) &&
              std::isfinite(h1) && std::isfinite(lam0) && std::isfinite(lam1)))
            throw std::invalid_argument("TelegraphParams: non-finite parameter");
        if (!(lam0 > 0.0) || !(lam1 > 0.0))
            throw std::invalid_argument("TelegraphParams: intensities must be positive");
    }

    /// True for parameter sets outside the model's standing assumption
    /// (equal drifts or a vanishing jump). Such sets are still usable; they
    /// serve as deterministic special cases.
    bool degenerate() const { return c0 == c1 || h0 == 0.0 || h1 == 0.0; }

    /// Relabel the two regimes (0 <-> 1).
    TelegraphParams swapped() const { return {c1, c0, h1, h0, lam1, lam0}; }
};

/// One exactly-sampled trajectory of the jump-telegraph process.
struct TelegraphPath {
    int initial_regime = 0;
    double horizon = 0.0;
    std::vector<double> switch_times;     // tau_1 < tau_2 < ... <= horizon
    std::vector<int> segment_regimes;     // regime on each inter-switch segment
    std::vector<double> y_at_switches;    // Y just after each switch
    double y_end = 0.0;                   // Y at the horizon

    std::size_t jump_count() const { return switch_times.size(); }
};

namespace detail {

inline void check_regime(int i) {
    if (i != 0 && i != 1) throw std::invalid_argument("regime must be 0 or 1");
}

inline void check_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw std::invalid_argument("time must be finite and non-negative");
}

} // namespace detail

/// E_i[Y_t], closed form.
inline double mean_jt(const TelegraphParams& p, int i, double t) {
    p.validate();
    detail::check_regime(i);
    detail::check_time(t);
    const double two_lam = p.lam0 + p.lam1;
    const double d0 = p.c0 + p.lam0 * p.h0;
    const double d1 = p.c1 + p.lam1 * p.h1;
    const double sign = (i == 0) ? 1.0 : -1.0;
    const double decay = -std::expm1(-two_lam * t) / two_lam; // (1 - e^{-2lam t}) / 2lam
    return ((p.lam1 * d0 + p.lam0 * d1) * t + sign * p.intensity(i) * (d0 - d1) * decay) / two_lam;
}

/// Moment generating function phi_i(z, t) = E_i[exp(z Y_t)], closed hyperbolic
/// form, continued through D <= 0 via cos/sin and a short series near D = 0.
inline double mgf_jt(const TelegraphParams& p, int i, double z, double t) {
    p.validate();
    detail::check_regime(i);
    detail::check_time(t);
    if (!std::isfinite(z)) throw std::invalid_argument("mgf_jt: z must be finite");
    if (t == 0.0) return 1.0;

    const double c = 0.5 * (p.c0 + p.c1);
    const double a = 0.5 * (p.c0 - p.c1);
    const double kappa = 0.5 * (p.lam0 - p.lam1);
    const double lam = 0.5 * (p.lam0 + p.lam1);
    const double cap_h = p.h0 + p.h1;

    if (z * cap_h > 700.0 || z * p.jump(i) > 700.0)
        throw std::overflow_error("mgf_jt: exp(z*h) overflows");

    const double q = a * z - kappa;
    const double d = q * q + p.lam0 * p.lam1 * std::exp(z * cap_h);
    const double e1 = t * (c * z - lam);
    // A_i such that phi = e^{e1} (cosh(t sqrt(D)) + A_i sinh(t sqrt(D))/sqrt(D))
    const double sign = (i == 0) ? 1.0 : -1.0;
    const double amp = sign * q + p.intensity(i) * std::exp(z * p.jump(i));

    double value;
    if (d * t * t > 1e-10) {
        const double s = t * std::sqrt(d);
        if (e1 + s > 709.0) throw std::overflow_error("mgf_jt: result overflows");
        const double b = amp / std::sqrt(d);
        value = 0.5 * std::exp(e1 + s) * (1.0 + b) + 0.5 * std::exp(e1 - s) * (1.0 - b);
    } else if (d * t * t < -1e-10) {
        const double w = std::sqrt(-d);
        value = std::exp(e1) * (std::cos(t * w) + amp * std::sin(t * w) / w);
    } else {
        // cosh(t sqrt(D)) and sinh(t sqrt(D))/sqrt(D) as series in D t^2
        const double u = d * t * t;
        const double ch = 1.0 + u / 2.0 + u * u / 24.0 + u * u * u / 720.0;
        const double sh = t * (1.0 + u / 6.0 + u * u / 120.0 + u * u * u / 5040.0);
        value = std::exp(e1) * (ch + amp * sh);
    }
    if (!std::isfinite(value)) throw std::overflow_error("mgf_jt: result overflows");
    return value;
}

/// Exact (discretization-free) path sampling: exponential holding times with
/// the current regime's intensity, linear drift between switches, jump at
/// each switch by the pre-switch regime's h.
inline TelegraphPath sample_path(const TelegraphParams& p, int i, double horizon,
                                 SubstreamRng& rng) {
    p.validate();
    detail::check_regime(i);
    detail::check_time(horizon);

    TelegraphPath path;
    path.initial_regime = i;
    path.horizon = horizon;
    path.segment_regimes.push_back(i);

    double t = 0.0;
    double y = 0.0;
    int regime = i;
    for (;;) {
        const double hold = rng.exponential(p.intensity(regime));
        if (t + hold >= horizon) {
            y += p.drift(regime) * (horizon - t);
            break;
        }
        t += hold;
        y += p.drift(regime) * hold + p.jump(regime);
        path.switch_times.push_back(t);
        path.y_at_switches.push_back(y);
        regime = 1 - regime;
        path.segment_regimes.push_back(regime);
    }
    path.y_end = y;
    return path;
}

/// Sample means (with standard errors) of the four martingale test processes
/// at time t: Z_t and its stochastic exponential, the compensated counter
/// M_t, and the jump density L_t^theta. Theoretical means are {0, 1, 0, 1}.
struct MartingaleStats {
    MeanStdErr z;            // compensated jump sum
    MeanStdErr dde_z;        // Doleans-Dade exponential of Z
    MeanStdErr m;            // compensated switch counter
    MeanStdErr l_theta;      // jump density
};

inline MartingaleStats martingale_stats(const TelegraphParams& p, int i, double t,
                                        std::size_t n_paths, double theta0, double theta1,
                                        std::uint64_t seed) {
    p.validate();
    detail::check_regime(i);
    detail::check_time(t);
    if (!(p.h0 > -1.0) || !(p.h1 > -1.0))
        throw std::invalid_argument("martingale_stats: requires h0, h1 > -1");
    if (!(theta0 > 0.0) || !(theta1 > 0.0))
        throw std::invalid_argument("martingale_stats: requires theta0, theta1 > 0");
    if (n_paths < 2) throw std::invalid_argument("martingale_stats: need n_paths >= 2");

    const double theta[2] = {theta0, theta1};
    std::vector<double> zs(n_paths), ds(n_paths), ms(n_paths), ls(n_paths);
    for (std::size_t k = 0; k < n_paths; ++k) {
        SubstreamRng rng(seed, k);
        const TelegraphPath path = sample_path(p, i, t, rng);

        double jump_sum = 0.0, prod_1ph = 1.0, prod_theta = 1.0;
        double int_hlam = 0.0, int_lam = 0.0, int_theta = 0.0;
        double seg_start = 0.0;
        for (std::size_t j = 0; j <= path.switch_times.size(); ++j) {
            const int reg = path.segment_regimes[j];
            const double seg_end =
                (j < path.switch_times.size()) ? path.switch_times[j] : t;
            const double len = seg_end - seg_start;
            int_hlam += p.jump(reg) * p.intensity(reg) * len;
            int_lam += p.intensity(reg) * len;
            int_theta += (1.0 - theta[reg]) * p.intensity(reg) * len;
            if (j < path.switch_times.size()) {
                jump_sum += p.jump(reg);
                prod_1ph *= 1.0 + p.jump(reg);
                prod_theta *= theta[reg];
            }
            seg_start = seg_end;
        }
        zs[k] = jump_sum - int_hlam;
        ds[k] = std::exp(-int_hlam) * prod_1ph;
        ms[k] = static_cast<double>(path.jump_count()) - int_lam;
        ls[k] = std::exp(int_theta) * prod_theta;
    }
    return {summarize(zs), summarize(ds), summarize(ms), summarize(ls)};
}

} // namespace jtrates
