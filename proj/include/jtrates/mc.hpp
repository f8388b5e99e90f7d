#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "jtrates/analytic.hpp"
#include "jtrates/model.hpp"
#include "jtrates/pde.hpp"
#include "jtrates/rng.hpp"
#include "jtrates/stats.hpp"

namespace jtrates {

struct McEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
    double step = 0.0; // diffusive refinement used (0 for exact kinds)
};

namespace detail {

// Discounted payoff exp(-\int_0^T r ds) for one path, without materializing
// the path. Antithetic mode pairs every Wiener increment with its negation
// on the same regime skeleton and returns the pair average.
inline double discounted_payoff(const ModelSpec& m, int i0, double r0, double cap_t,
                                double step, bool antithetic, SubstreamRng& rng) {
    double t = 0.0;
    int regime = i0;
    double r_p = r0, r_m = r0;       // plus / minus Wiener sign
    double int_p = 0.0, int_m = 0.0;
    const bool diffusive = m.diffusive();
    const bool dothan = m.dothan();

    while (t < cap_t) {
        const double hold = rng.exponential(m.lambda(regime));
        const double seg_end = std::min(t + hold, cap_t);
        const bool switches = seg_end < cap_t;
        const double drift = m.drift(regime);
        const double sig = m.sigma(regime);
        const double len = seg_end - t;

        if (!diffusive) {
            if (dothan) {
                int_p += r_p * growth_integral(drift, len);
                r_p *= std::exp(drift * len);
            } else {
                int_p += r_p * len + 0.5 * drift * len * len;
                r_p += drift * len;
            }
        } else {
            const auto n_sub = std::max<std::size_t>(
                1, static_cast<std::size_t>(std::ceil(len / step)));
            const double dt = len / static_cast<double>(n_sub);
            const double sqdt = std::sqrt(dt);
            for (std::size_t s = 0; s < n_sub; ++s) {
                const double dw = sqdt * rng.normal();
                if (dothan) {
                    const double base = (drift - 0.5 * sig * sig) * dt;
                    const double next_p = r_p * std::exp(base + sig * dw);
                    int_p += 0.5 * (r_p + next_p) * dt;
                    r_p = next_p;
                    if (antithetic) {
                        const double next_m = r_m * std::exp(base - sig * dw);
                        int_m += 0.5 * (r_m + next_m) * dt;
                        r_m = next_m;
                    }
                } else {
                    const double next_p = r_p + drift * dt + sig * dw;
                    int_p += 0.5 * (r_p + next_p) * dt;
                    r_p = next_p;
                    if (antithetic) {
                        const double next_m = r_m + drift * dt - sig * dw;
                        int_m += 0.5 * (r_m + next_m) * dt;
                        r_m = next_m;
                    }
                }
            }
        }
        t = seg_end;
        if (switches) {
            const double jump = m.eta(regime);
            if (dothan) {
                r_p *= 1.0 + jump;
                r_m *= 1.0 + jump;
            } else {
                r_p += jump;
                r_m += jump;
            }
            regime = 1 - regime;
        }
    }
    if (antithetic && diffusive)
        return 0.5 * (std::exp(-int_p) + std::exp(-int_m));
    return std::exp(-int_p);
}

} // namespace detail

/// Monte Carlo price of the zero-coupon bond E^Q[exp(-\int_0^T r ds)].
/// Deterministic for fixed (seed, n_paths, cfg) at any thread count: paths
/// draw from per-index substreams and the reduction is pairwise.
inline McEstimate price_bond_mc(const ModelSpec& model, int i, double r0, double maturity,
                                std::size_t n_paths, const SolverConfig& cfg,
                                std::uint64_t seed) {
    model.validate();
    model.require_risk_neutral("price_bond_mc");
    detail::check_regime(i);
    detail::check_time(maturity);
    if (n_paths < 2) throw std::invalid_argument("price_bond_mc: need n_paths >= 2");
    if (model.diffusive() && !(cfg.mc_step > 0.0))
        throw std::invalid_argument("price_bond_mc: mc_step must be positive");

    std::vector<double> payoffs(n_paths);
    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            SubstreamRng rng(seed, k);
            payoffs[k] = detail::discounted_payoff(model, i, r0, maturity, cfg.mc_step,
                                                   cfg.antithetic, rng);
        }
    };

    std::size_t n_threads = cfg.n_threads ? cfg.n_threads : std::thread::hardware_concurrency();
    n_threads = std::clamp<std::size_t>(n_threads, 1, n_paths);
    if (n_threads == 1) {
        worker(0, n_paths);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        const std::size_t chunk = (n_paths + n_threads - 1) / n_threads;
        for (std::size_t w = 0; w < n_threads; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(begin + chunk, n_paths);
            if (begin < end) pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    const MeanStdErr s = summarize(payoffs);
    McEstimate out;
    out.value = s.mean;
    out.stderr_ = s.stderr_;
    out.n_paths = n_paths;
    out.seed = seed;
    out.step = model.diffusive() ? cfg.mc_step : 0.0;
    return out;
}

enum class ForwardMethod { Pde, Mc };

/// Expectation-hypothesis forward curve vs the forward curve implied by
/// arbitrage-free prices, per maturity grid point.
struct ConvexityReport {
    ModelKind model = ModelKind::JtMerton;
    int regime = 0;
    ForwardMethod method = ForwardMethod::Pde;
    std::vector<double> maturities;
    std::vector<double> f_exp;
    std::vector<double> f_impl;
    std::vector<double> adjustment;
    std::vector<double> stderr_; // propagated, zero for the PDE method
};

/// Default report grid: geometric, resolving the short end where the
/// adjustment vanishes.
inline std::vector<double> geometric_maturity_grid(double maturity, std::size_t points = 41) {
    std::vector<double> grid(points);
    const double lo = maturity / 40.0;
    const double ratio = std::pow(maturity / lo, 1.0 / static_cast<double>(points - 1));
    double v = lo;
    for (std::size_t k = 0; k < points; ++k, v *= ratio) grid[k] = v;
    grid.back() = maturity;
    return grid;
}

inline ConvexityReport convexity_adjustment(const ModelSpec& model, int i, double r0,
                                            const std::vector<double>& maturities,
                                            ForwardMethod method, const SolverConfig& cfg,
                                            std::uint64_t seed = 0) {
    model.validate();
    model.require_risk_neutral("convexity_adjustment");
    detail::check_regime(i);
    if (maturities.size() < 3)
        throw std::invalid_argument("convexity_adjustment: need at least 3 grid points");
    for (std::size_t k = 0; k + 1 < maturities.size(); ++k) {
        if (!(maturities[k + 1] > maturities[k]) || !(maturities[k] >= 0.0))
            throw std::invalid_argument("convexity_adjustment: grid must be strictly increasing");
        if (maturities[k + 1] - maturities[k] < 1e-4)
            throw std::invalid_argument(
                "convexity_adjustment: grid spacing below 1e-4, differencing unstable");
    }

    const std::size_t n = maturities.size();
    std::vector<double> log_price(n), log_se(n, 0.0);
    if (method == ForwardMethod::Pde) {
        if (model.dothan()) {
            SolverConfig fd_cfg = cfg;
            fd_cfg.fd_probe_x = r0;
            const FdSolution sol = solve_dothan_fd(model, maturities.back(), fd_cfg);
            for (std::size_t k = 0; k < n; ++k)
                log_price[k] = std::log(sol.price_at_tau(i, maturities[k]));
        } else {
            const OdeReduction sol = solve_merton_ode(model, maturities.back(), cfg);
            for (std::size_t k = 0; k < n; ++k)
                log_price[k] = std::log(sol.price_at_tau(i, maturities[k], r0));
        }
    } else {
        for (std::size_t k = 0; k < n; ++k) {
            const McEstimate est =
                price_bond_mc(model, i, r0, maturities[k], cfg.mc_paths, cfg, seed + k);
            log_price[k] = std::log(est.value);
            log_se[k] = est.stderr_ / est.value;
        }
    }

    ConvexityReport rep;
    rep.model = model.kind;
    rep.regime = i;
    rep.method = method;
    rep.maturities = maturities;
    rep.f_exp.resize(n);
    rep.f_impl.resize(n);
    rep.adjustment.resize(n);
    rep.stderr_.resize(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
        rep.f_exp[k] = expected_future_rate(model, i, r0, maturities[k]);

    // nonuniform 3-point differentiation of -log F
    auto diff3 = [&](std::size_t k) {
        const double h1 = maturities[k] - maturities[k - 1];
        const double h2 = maturities[k + 1] - maturities[k];
        const double w_m = -h2 / (h1 * (h1 + h2));
        const double w_c = (h2 - h1) / (h1 * h2);
        const double w_p = h1 / (h2 * (h1 + h2));
        const double d = w_m * log_price[k - 1] + w_c * log_price[k] + w_p * log_price[k + 1];
        const double se = std::sqrt(w_m * w_m * log_se[k - 1] * log_se[k - 1] +
                                    w_c * w_c * log_se[k] * log_se[k] +
                                    w_p * w_p * log_se[k + 1] * log_se[k + 1]);
        return std::pair<double, double>(-d, se);
    };
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const auto [d, se] = diff3(k);
        rep.f_impl[k] = d;
        rep.stderr_[k] = se;
    }
    // one-sided second-order ends
    {
        const double h1 = maturities[1] - maturities[0];
        const double h2 = maturities[2] - maturities[1];
        const double w0 = -(2.0 * h1 + h2) / (h1 * (h1 + h2));
        const double w1 = (h1 + h2) / (h1 * h2);
        const double w2 = -h1 / (h2 * (h1 + h2));
        rep.f_impl[0] = -(w0 * log_price[0] + w1 * log_price[1] + w2 * log_price[2]);
        rep.stderr_[0] = std::sqrt(w0 * w0 * log_se[0] * log_se[0] +
                                   w1 * w1 * log_se[1] * log_se[1] +
                                   w2 * w2 * log_se[2] * log_se[2]);
    }
    {
        const double h1 = maturities[n - 2] - maturities[n - 3];
        const double h2 = maturities[n - 1] - maturities[n - 2];
        const double w0 = h2 / (h1 * (h1 + h2));
        const double w1 = -(h1 + h2) / (h1 * h2);
        const double w2 = (h1 + 2.0 * h2) / (h2 * (h1 + h2));
        rep.f_impl[n - 1] =
            -(w0 * log_price[n - 3] + w1 * log_price[n - 2] + w2 * log_price[n - 1]);
        rep.stderr_[n - 1] = std::sqrt(w0 * w0 * log_se[n - 3] * log_se[n - 3] +
                                       w1 * w1 * log_se[n - 2] * log_se[n - 2] +
                                       w2 * w2 * log_se[n - 1] * log_se[n - 1]);
    }
    for (std::size_t k = 0; k < n; ++k) rep.adjustment[k] = rep.f_impl[k] - rep.f_exp[k];
    return rep;
}

inline std::string to_csv(const ConvexityReport& rep) {
    std::string out = "maturity,f_exp,f_impl,adjustment,stderr\n";
    char buf[160];
    for (std::size_t k = 0; k < rep.maturities.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", rep.maturities[k],
                      rep.f_exp[k], rep.f_impl[k], rep.adjustment[k], rep.stderr_[k]);
        out += buf;
    }
    return out;
}

} // namespace jtrates
