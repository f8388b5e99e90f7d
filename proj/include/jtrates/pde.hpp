#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "jtrates/model.hpp"

namespace jtrates {

/// Grid and step settings for the ODE, finite-difference, and Monte Carlo
/// engines.
struct SolverConfig {
    double ode_step = 1e-4;       // RK4 step, years
    std::size_t fd_nx = 2000;
    std::size_t fd_nt = 2000;
    double fd_xmax = 0.0;         // 0 = automatic truncation
    double fd_probe_x = -1.0;     // record a maturity sweep at this rate (< 0 = off)
    bool fd_store_surface = false;
    double mc_step = 1.0 / 256.0; // diffusive refinement, years
    std::size_t mc_paths = 1'000'000;
    std::size_t n_threads = 0;    // 0 = hardware concurrency
    bool antithetic = false;
    double check_step_t = 1e-5;   // residual check, time difference
    double check_step_x = 1e-4;   // residual check, space difference
};

/// Affine reduction of the Merton-family pricing system: C(tau) = -tau and
/// regime intercepts D_i(tau) integrated by RK4. Evaluation between stored
/// nodes re-integrates a partial step, so D is smooth to solver accuracy.
class OdeReduction {
public:
    OdeReduction(const ModelSpec& model, double maturity, double step)
        : maturity_(maturity), step_(step) {
        for (int i = 0; i < 2; ++i) {
            drift_[i] = model.drift(i);
            sig2_[i] = model.sigma(i) * model.sigma(i);
            eta_[i] = model.eta(i);
            lam_[i] = model.lambda(i);
        }
        const auto n = static_cast<std::size_t>(std::ceil(maturity / step - 1e-12));
        nodes_.reserve(n + 1);
        State d{0.0, 0.0};
        nodes_.push_back(d);
        double tau = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double h = std::min(step, maturity - tau);
            d = rk4_step(tau, d, h);
            tau += h;
            nodes_.push_back(d);
        }
    }

    double maturity() const { return maturity_; }
    double step() const { return step_; }

    double loading(double tau) const { return -tau; }

    std::array<double, 2> intercepts(double tau) const {
        if (!(tau >= 0.0) || tau > maturity_ * (1.0 + 1e-12))
            throw std::invalid_argument("OdeReduction: tau outside [0, maturity]");
        tau = std::min(tau, maturity_);
        const auto k = std::min(static_cast<std::size_t>(tau / step_), nodes_.size() - 1);
        const double tau_k = static_cast<double>(k) * step_;
        State d = nodes_[k];
        if (tau > tau_k) d = rk4_step(tau_k, d, tau - tau_k);
        return d;
    }

    /// F_i(t, x) = exp(x * C(tau) + D_i(tau)) with tau = maturity - t.
    double price_at_tau(int i, double tau, double x) const {
        const auto d = intercepts(tau);
        return std::exp(x * loading(tau) + d[static_cast<std::size_t>(i)]);
    }

    double price(int i, double t, double x) const { return price_at_tau(i, maturity_ - t, x); }

private:
    using State = std::array<double, 2>;

    State rhs(double tau, const State& d) const {
        State out;
        for (int i = 0; i < 2; ++i) {
            const int j = 1 - i;
            out[i] = -drift_[i] * tau + 0.5 * sig2_[i] * tau * tau +
                     lam_[i] * std::expm1(-eta_[i] * tau + d[j] - d[i]);
        }
        return out;
    }

    State rk4_step(double tau, const State& d, double h) const {
        const State k1 = rhs(tau, d);
        const State k2 = rhs(tau + h / 2, {d[0] + h / 2 * k1[0], d[1] + h / 2 * k1[1]});
        const State k3 = rhs(tau + h / 2, {d[0] + h / 2 * k2[0], d[1] + h / 2 * k2[1]});
        const State k4 = rhs(tau + h, {d[0] + h * k3[0], d[1] + h * k3[1]});
        return {d[0] + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
                d[1] + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
    }

    double maturity_;
    double step_;
    double drift_[2], sig2_[2], eta_[2], lam_[2];
    std::vector<State> nodes_;
};

inline OdeReduction solve_merton_ode(const ModelSpec& model, double maturity,
                                     const SolverConfig& cfg = {}) {
    model.validate();
    model.require_risk_neutral("solve_merton_ode");
    detail::check_time(maturity);
    if (model.dothan()) throw std::invalid_argument("solve_merton_ode: Merton kinds only");
    if (!(cfg.ode_step > 0.0)) throw std::invalid_argument("solve_merton_ode: ode_step must be positive");
    return OdeReduction(model, maturity, cfg.ode_step);
}

/// Implicit upwind finite-difference solution of the Dothan-family pricing
/// system on [0, x_max].
struct FdSolution {
    std::vector<double> x;
    double dt = 0.0;
    std::size_t nt = 0;
    double maturity = 0.0;
    std::array<std::vector<double>, 2> values; // F_i(0, x)

    // maturity sweep at probe_x (time homogeneity: F(t, x) prices tau = T - t)
    double probe_x = -1.0;
    std::vector<double> probe_taus;               // ascending
    std::array<std::vector<double>, 2> probe_values;

    // optional full surfaces, time-major from t = T down to 0
    std::array<std::vector<std::vector<double>>, 2> surfaces;

    double min_value = 1.0;
    double max_monotonicity_defect = 0.0; // max increase of F in x, over all levels

    double interpolate(const std::vector<double>& f, double x0) const {
        const double dx = x[1] - x[0];
        if (x0 < 0.0 || x0 > x.back())
            throw std::invalid_argument("FdSolution: rate outside the spatial grid");
        const auto j = std::min(static_cast<std::size_t>(x0 / dx), x.size() - 2);
        const double w = (x0 - x[j]) / dx;
        return (1.0 - w) * f[j] + w * f[j + 1];
    }

    double price(int i, double x0) const { return interpolate(values[static_cast<std::size_t>(i)], x0); }

    double price_at_tau(int i, double tau) const {
        if (probe_taus.empty())
            throw std::logic_error("FdSolution: no probe column recorded");
        if (tau < 0.0 || tau > probe_taus.back() * (1.0 + 1e-12))
            throw std::invalid_argument("FdSolution: tau outside the recorded sweep");
        const auto& pv = probe_values[static_cast<std::size_t>(i)];
        const auto it = std::lower_bound(probe_taus.begin(), probe_taus.end(), tau);
        if (it == probe_taus.begin()) return pv.front();
        if (it == probe_taus.end()) return pv.back();
        const auto k = static_cast<std::size_t>(it - probe_taus.begin());
        const double w = (tau - probe_taus[k - 1]) / (probe_taus[k] - probe_taus[k - 1]);
        return (1.0 - w) * pv[k - 1] + w * pv[k];
    }
};

inline FdSolution solve_dothan_fd(const ModelSpec& model, double maturity,
                                  const SolverConfig& cfg = {}) {
    model.validate();
    model.require_risk_neutral("solve_dothan_fd");
    detail::check_time(maturity);
    if (!model.dothan()) throw std::invalid_argument("solve_dothan_fd: Dothan kinds only");
    if (cfg.fd_nx < 2 || cfg.fd_nt < 1)
        throw std::invalid_argument("solve_dothan_fd: grid too small");

    const double drift[2] = {model.drift(0), model.drift(1)};
    const double sig[2] = {model.sigma(0), model.sigma(1)};
    const double eta[2] = {model.eta(0), model.eta(1)};
    const double lam[2] = {model.lambda(0), model.lambda(1)};

    double xmax = cfg.fd_xmax;
    if (xmax <= 0.0) {
        const double speed = std::max(std::fabs(drift[0]), std::fabs(drift[1])) +
                             std::max(sig[0], sig[1]) * std::max(sig[0], sig[1]);
        const double anchor = cfg.fd_probe_x > 0.0 ? cfg.fd_probe_x : 0.05;
        xmax = std::max(1.0, anchor * std::exp(speed * maturity) * 8.0);
    }
    const double max_eta = std::max(eta[0], eta[1]);
    if (cfg.fd_probe_x > 0.0 && cfg.fd_probe_x * (1.0 + std::max(0.0, max_eta)) > xmax)
        throw std::invalid_argument("solve_dothan_fd: x_max too small for the jump destination");

    const std::size_t nx = cfg.fd_nx;
    const double dx = xmax / static_cast<double>(nx);
    const double dt = maturity / static_cast<double>(cfg.fd_nt);

    FdSolution sol;
    sol.x.resize(nx + 1);
    for (std::size_t j = 0; j <= nx; ++j) sol.x[j] = static_cast<double>(j) * dx;
    sol.dt = dt;
    sol.nt = cfg.fd_nt;
    sol.maturity = maturity;
    sol.probe_x = cfg.fd_probe_x;

    // jump destination interpolation weights per regime
    std::array<std::vector<std::size_t>, 2> dest_idx;
    std::array<std::vector<double>, 2> dest_w;   // -1 marks extrapolation past x_max
    for (int i = 0; i < 2; ++i) {
        dest_idx[i].resize(nx + 1);
        dest_w[i].resize(nx + 1);
        for (std::size_t j = 0; j <= nx; ++j) {
            const double xd = sol.x[j] * (1.0 + eta[i]);
            if (xd > xmax) {
                dest_idx[i][j] = nx;
                dest_w[i][j] = -1.0;
            } else {
                auto k = std::min(static_cast<std::size_t>(xd / dx), nx - 1);
                dest_idx[i][j] = k;
                // clamp: roundoff at exact-node destinations must not produce a
                // negative weight, which would collide with the sentinel above
                dest_w[i][j] = std::clamp((xd - sol.x[k]) / dx, 0.0, 1.0);
            }
        }
    }

    // time-constant tridiagonal factors M = I - dt*A per regime
    std::array<std::vector<double>, 2> lo, di, up;
    for (int i = 0; i < 2; ++i) {
        lo[i].assign(nx + 1, 0.0);
        di[i].assign(nx + 1, 1.0);
        up[i].assign(nx + 1, 0.0);
        for (std::size_t j = 1; j < nx; ++j) {
            const double a = drift[i] * sol.x[j];
            const double b = 0.5 * sig[i] * sig[i] * sol.x[j] * sol.x[j];
            double cl = b / (dx * dx), cu = b / (dx * dx);
            double cd = -2.0 * b / (dx * dx);
            if (a > 0.0) { cu += a / dx; cd -= a / dx; }
            else         { cl += -a / dx; cd += a / dx; }
            cd -= sol.x[j] + lam[i];
            lo[i][j] = -dt * cl;
            di[i][j] = 1.0 - dt * cd;
            up[i][j] = -dt * cu;
        }
        // x = 0: transport and diffusion vanish, only the regime coupling acts
        di[i][0] = 1.0 + dt * lam[i];
        // far boundary: zero second difference, one-sided transport
        const double a = drift[i] * sol.x[nx];
        lo[i][nx] = -dt * (-a / dx);
        di[i][nx] = 1.0 - dt * (a / dx - (sol.x[nx] + lam[i]));
    }

    std::array<std::vector<double>, 2> f = {std::vector<double>(nx + 1, 1.0),
                                            std::vector<double>(nx + 1, 1.0)};
    std::array<std::vector<double>, 2> f_next = f;
    std::vector<double> rhs(nx + 1), scratch(nx + 1);

    auto record_level = [&](double tau) {
        if (cfg.fd_probe_x >= 0.0) {
            sol.probe_taus.push_back(tau);
            for (int i = 0; i < 2; ++i)
                sol.probe_values[i].push_back(sol.interpolate(f[i], cfg.fd_probe_x));
        }
        if (cfg.fd_store_surface)
            for (int i = 0; i < 2; ++i) sol.surfaces[i].push_back(f[i]);
        for (int i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j <= nx; ++j)
                sol.min_value = std::min(sol.min_value, f[i][j]);
            for (std::size_t j = 0; j + 1 <= nx; ++j)
                sol.max_monotonicity_defect =
                    std::max(sol.max_monotonicity_defect, f[i][j + 1] - f[i][j]);
        }
    };

    record_level(0.0);
    for (std::size_t n = 0; n < cfg.fd_nt; ++n) {
        for (int i = 0; i < 2; ++i) {
            const auto& g = f[1 - i]; // lagged coupling keeps the solve tridiagonal
            const double slope = (g[nx] - g[nx - 1]) / dx;
            for (std::size_t j = 0; j <= nx; ++j) {
                double coupled;
                if (dest_w[i][j] < 0.0) {
                    const double xd = sol.x[j] * (1.0 + eta[i]);
                    coupled = std::max(0.0, g[nx] + slope * (xd - sol.x[nx]));
                } else {
                    const auto k = dest_idx[i][j];
                    coupled = (1.0 - dest_w[i][j]) * g[k] + dest_w[i][j] * g[k + 1];
                }
                rhs[j] = f[i][j] + dt * lam[i] * coupled;
            }
            // Thomas algorithm
            auto& out = f_next[i];
            scratch[0] = up[i][0] / di[i][0];
            out[0] = rhs[0] / di[i][0];
            for (std::size_t j = 1; j <= nx; ++j) {
                const double denom = di[i][j] - lo[i][j] * scratch[j - 1];
                scratch[j] = up[i][j] / denom;
                out[j] = (rhs[j] - lo[i][j] * out[j - 1]) / denom;
            }
            for (std::size_t j = nx; j-- > 0;) out[j] -= scratch[j] * out[j + 1];
        }
        std::swap(f, f_next);
        record_level(static_cast<double>(n + 1) * dt);
    }
    sol.values = f;
    return sol;
}

/// Write the stored surfaces as CSV: t, x, F0, F1.
inline void dump_surface_csv(const FdSolution& sol, std::ostream& os) {
    if (sol.surfaces[0].empty())
        throw std::logic_error("dump_surface_csv: surfaces were not stored");
    os << "t,x,F0,F1\n";
    for (std::size_t level = 0; level < sol.surfaces[0].size(); ++level) {
        const double t = sol.maturity - static_cast<double>(level) * sol.dt;
        for (std::size_t j = 0; j < sol.x.size(); ++j)
            os << t << ',' << sol.x[j] << ',' << sol.surfaces[0][level][j] << ','
               << sol.surfaces[1][level][j] << '\n';
    }
}

using PriceFn = std::function<double(int regime, double t, double x)>;

/// Numerical residual of the coupled pricing system at (t, x):
/// dF/dt + L F - x F, one value per regime. Derivatives by central
/// differences with the configured check steps.
inline std::array<double, 2> feynman_kac_residual(const ModelSpec& model, const PriceFn& f,
                                                  double t, double x,
                                                  const SolverConfig& cfg = {}) {
    model.validate();
    const double ht = cfg.check_step_t;
    const double hx = cfg.check_step_x;
    std::array<double, 2> out{};
    for (int i = 0; i < 2; ++i) {
        const double fc = f(i, t, x);
        const double dfdt = (f(i, t + ht, x) - f(i, t - ht, x)) / (2.0 * ht);
        const double dfdx = (f(i, t, x + hx) - f(i, t, x - hx)) / (2.0 * hx);
        const double d2fdx2 = (f(i, t, x + hx) - 2.0 * fc + f(i, t, x - hx)) / (hx * hx);
        const double a = model.dothan() ? model.drift(i) * x : model.drift(i);
        const double s = model.dothan() ? model.sigma(i) * x : model.sigma(i);
        const double x_jump = model.dothan() ? x * (1.0 + model.eta(i)) : x + model.eta(i);
        out[static_cast<std::size_t>(i)] = dfdt + a * dfdx + 0.5 * s * s * d2fdx2 +
                                           model.lambda(i) * (f(1 - i, t, x_jump) - fc) -
                                           x * fc;
    }
    return out;
}

} // namespace jtrates
