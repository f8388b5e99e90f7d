#pragma once

#include <cmath>
#include <stdexcept>

#include "jtrates/model.hpp"

namespace jtrates {

namespace detail {

// \int_0^tau s^n e^{beta s} ds
inline double power_exp_integral(int n, double beta, double tau) {
    if (std::fabs(beta * tau) < 1e-6) {
        // series in beta*tau
        double sum = 0.0, term = 1.0;
        for (int k = 0; k < 8; ++k) {
            sum += term / static_cast<double>(n + k + 1);
            term *= beta * tau / static_cast<double>(k + 1);
        }
        return std::pow(tau, n + 1) * sum;
    }
    double acc = growth_integral(beta, tau); // n = 0
    const double e = std::exp(beta * tau);
    double tau_pow = 1.0;
    for (int k = 1; k <= n; ++k) {
        tau_pow *= tau;
        acc = (tau_pow * e - static_cast<double>(k) * acc) / beta;
    }
    return acc;
}

// \int_0^tau e^{beta s} cosh(s sqrt(d)) ds, any sign of d; the apparent pole
// at beta^2 = d is removable and never materializes in this form.
inline double cosh_kernel_integral(double beta, double d, double tau) {
    if (d * tau * tau > 1e-10) {
        const double k = std::sqrt(d);
        return 0.5 * (growth_integral(beta + k, tau) + growth_integral(beta - k, tau));
    }
    if (d * tau * tau < -1e-10) {
        const double w = std::sqrt(-d);
        return (std::exp(beta * tau) * (beta * std::cos(w * tau) + w * std::sin(w * tau)) - beta) /
               (beta * beta + w * w);
    }
    return power_exp_integral(0, beta, tau) + d * power_exp_integral(2, beta, tau) / 2.0 +
           d * d * power_exp_integral(4, beta, tau) / 24.0 +
           d * d * d * power_exp_integral(6, beta, tau) / 720.0;
}

// \int_0^tau e^{beta s} sinh(s sqrt(d))/sqrt(d) ds, any sign of d.
inline double sinhc_kernel_integral(double beta, double d, double tau) {
    if (d * tau * tau > 1e-10) {
        const double k = std::sqrt(d);
        return (growth_integral(beta + k, tau) - growth_integral(beta - k, tau)) / (2.0 * k);
    }
    if (d * tau * tau < -1e-10) {
        const double w = std::sqrt(-d);
        return (std::exp(beta * tau) * (beta * std::sin(w * tau) / w - std::cos(w * tau)) + 1.0) /
               (beta * beta + w * w);
    }
    return power_exp_integral(1, beta, tau) + d * power_exp_integral(3, beta, tau) / 6.0 +
           d * d * power_exp_integral(5, beta, tau) / 120.0 +
           d * d * d * power_exp_integral(7, beta, tau) / 5040.0;
}

} // namespace detail

/// Affine loadings of the Merton-family expectation-hypothesis price
/// F_i = exp(r * C + D_i).
struct AffineCoeffs {
    double c = 0.0;  // loading on r, equals -(T - t)
    double d0 = 0.0;
    double d1 = 0.0;

    double intercept(int i) const { return i == 0 ? d0 : d1; }
};

inline AffineCoeffs affine_coeffs(const ModelSpec& m, double tau) {
    m.validate();
    m.require_risk_neutral("affine_coeffs");
    detail::check_time(tau);
    if (m.dothan()) throw std::invalid_argument("affine_coeffs: Merton kinds only");

    const double d0 = m.drift(0) + m.lambda0 * m.eta0;
    const double d1 = m.drift(1) + m.lambda1 * m.eta1;
    const double two_lam = m.lambda0 + m.lambda1;
    const double u = two_lam * tau;
    const double shape = (u + std::expm1(-u)) / (two_lam * two_lam); // (2l*tau + e^{-2l*tau} - 1) / (2l)^2
    AffineCoeffs out;
    out.c = -tau;
    for (int i = 0; i < 2; ++i) {
        const double sign = (i == 0) ? 1.0 : -1.0;
        const double di = -((m.lambda1 * d0 + m.lambda0 * d1) * tau * tau / 2.0 +
                            sign * m.lambda(i) * (d0 - d1) * shape) /
                          two_lam;
        (i == 0 ? out.d0 : out.d1) = di;
    }
    return out;
}

/// Time functions of the Dothan-family expectation-hypothesis price
/// F_i = exp(-r * (G + E_i * H)). H here carries the 1/sqrt(D) factor of the
/// sinh kernel, so E_i is the plain regime amplitude; the product E_i * H
/// matches the usual normalization and stays finite for any sign of D.
struct DothanCoeffs {
    double g = 0.0;
    double h = 0.0;
    double e0 = 0.0;
    double e1 = 0.0;
    bool tilde = false; // sigma^2/2 shift applied (diffusive case)

    double weight(int i) const { return i == 0 ? e0 : e1; }
    double exposure(int i) const { return g + weight(i) * h; }
};

inline DothanCoeffs dothan_coeffs(const ModelSpec& m, double tau) {
    m.validate();
    m.require_risk_neutral("dothan_coeffs");
    detail::check_time(tau);
    if (!m.dothan()) throw std::invalid_argument("dothan_coeffs: Dothan kinds only");
    if (m.kind == ModelKind::JtdDothan && m.sigma0 != m.sigma1)
        throw std::invalid_argument("dothan_coeffs: jtd_dothan requires sigma0 == sigma1");

    const double sig2 = m.sigma0 * m.sigma0;
    const double m0 = m.drift(0) - 0.5 * sig2;
    const double m1 = m.drift(1) - 0.5 * sig2;
    const double zeta = 0.5 * (m0 + m1);
    const double chi = 0.5 * (m0 - m1);
    const double lam = 0.5 * (m.lambda0 + m.lambda1);
    const double nu = 0.5 * (m.lambda0 - m.lambda1);
    const double d = (chi - nu) * (chi - nu) +
                     m.lambda0 * m.lambda1 * (1.0 + m.eta0) * (1.0 + m.eta1);
    const double beta = zeta - lam + 0.5 * sig2;

    DothanCoeffs out;
    out.tilde = m.diffusive();
    out.g = detail::cosh_kernel_integral(beta, d, tau);
    out.h = detail::sinhc_kernel_integral(beta, d, tau);
    out.e0 = (chi - nu) + m.lambda0 * (1.0 + m.eta0);
    out.e1 = -(chi - nu) + m.lambda1 * (1.0 + m.eta1);
    return out;
}

/// Expectation-hypothesis forward curve point: the expected future spot rate.
inline double forward_rate(const ModelSpec& m, int i, double r, double t, double cap_t) {
    if (!(cap_t >= t)) throw std::invalid_argument("forward_rate: requires T >= t");
    return expected_future_rate(m, i, r, cap_t - t);
}

/// Zero-coupon bond price under the unbiased expectation hypothesis.
inline double bond_price_expectation(const ModelSpec& m, int i, double r, double t,
                                     double cap_t) {
    if (!(cap_t >= t)) throw std::invalid_argument("bond_price_expectation: requires T >= t");
    detail::check_regime(i);
    const double tau = cap_t - t;
    if (m.dothan()) {
        const DothanCoeffs coeffs = dothan_coeffs(m, tau);
        return std::exp(-r * coeffs.exposure(i));
    }
    const AffineCoeffs coeffs = affine_coeffs(m, tau);
    return std::exp(r * coeffs.c + coeffs.intercept(i));
}

} // namespace jtrates
