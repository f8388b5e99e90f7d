#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "jtrates/measure.hpp"

using namespace jtrates;

namespace {

ModelSpec physical_merton() {
    ModelSpec m{ModelKind::JtMerton, -0.02, 0.05, 0.0, 0.0, 0.01, -0.02, 0.5, 1.0};
    m.measure = MeasureTag::Physical;
    return m;
}

ModelSpec physical_jtd_merton() {
    ModelSpec m{ModelKind::JtdMerton, -0.02, 0.05, 0.02, 0.06, 0.01, -0.02, 0.5, 1.0};
    m.measure = MeasureTag::Physical;
    m.measure_params = MeasureParams{2.0, 2.0, 0.5, 1.0};
    return m;
}

} // namespace

TEST_CASE("identity change of measure leaves dynamics unchanged") {
    ModelSpec m = physical_merton();
    m.measure_params = MeasureParams{1.0, 1.0, 0.0, 0.0};
    const ModelSpec q = to_risk_neutral(m);
    CHECK(q.measure == MeasureTag::RiskNeutral);
    CHECK(q.lambda0 == m.lambda0);
    CHECK(q.lambda1 == m.lambda1);
    CHECK(q.drift(0) == m.drift(0));
    CHECK(q.drift(1) == m.drift(1));
}

TEST_CASE("intensities scale by theta and drift shifts by sigma*psi") {
    const ModelSpec q = to_risk_neutral(physical_jtd_merton());
    CHECK(q.lambda0 == doctest::Approx(1.0));
    CHECK(q.lambda1 == doctest::Approx(2.0));
    // regime-0 drift under Q: mu + sigma*psi = -0.02 + 0.02*0.5 = -0.01
    CHECK(q.drift(0) == doctest::Approx(-0.01).epsilon(1e-14));
    CHECK(q.drift(1) == doctest::Approx(0.05 + 0.06).epsilon(1e-14));
}

TEST_CASE("applying to_risk_neutral twice is an error") {
    const ModelSpec q = to_risk_neutral(physical_merton());
    CHECK_THROWS_AS(to_risk_neutral(q), std::logic_error);
}

TEST_CASE("identity density is one on every path") {
    const ModelSpec m = physical_merton();
    const MeasureParams identity{1.0, 1.0, 0.0, 0.0};
    for (std::uint64_t k = 0; k < 200; ++k) {
        SubstreamRng rng(3, k);
        const RatePath path = simulate_rate(m, 0.05, 0, 1.0, 0.0, rng);
        CHECK(radon_nikodym_on_path(identity, m, path) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("pure-jump density equals the explicit theta formula") {
    const ModelSpec m = physical_merton();
    const MeasureParams mp{1.7, 0.4, 0.0, 0.0};
    for (std::uint64_t k = 0; k < 500; ++k) {
        SubstreamRng rng(17, k);
        const RatePath path = simulate_rate(m, 0.05, static_cast<int>(k % 2), 1.5, 0.0, rng);
        // recompute directly from segments
        double integral = 0.0, prod = 1.0;
        for (std::size_t j = 0; j + 1 < path.size(); ++j) {
            const int i = path.regimes[j];
            integral += (1.0 - mp.theta(i)) * m.lambda(i) * (path.times[j + 1] - path.times[j]);
        }
        for (std::size_t node : path.switch_nodes) prod *= mp.theta(path.regimes[node - 1]);
        const double expected = std::exp(integral) * prod;
        CHECK(radon_nikodym_on_path(mp, m, path) == doctest::Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("diffusive model requires stored Wiener increments") {
    const ModelSpec m = physical_jtd_merton();
    RatePath path;
    path.times = {0.0, 1.0};
    path.regimes = {0, 0};
    path.rates = {0.05, 0.05};
    path.integrals = {0.0, 0.05};
    CHECK_THROWS_AS(radon_nikodym_on_path(m.measure_params, m, path), std::invalid_argument);
}

TEST_CASE("density has unit mean for random measure changes") {
    SubstreamRng draw(555, 0);
    for (int trial = 0; trial < 3; ++trial) {
        MeasureParams mp;
        mp.theta0 = 0.25 + 3.75 * draw.uniform();
        mp.theta1 = 0.25 + 3.75 * draw.uniform();
        mp.psi0 = -2.0 + 4.0 * draw.uniform();
        mp.psi1 = -2.0 + 4.0 * draw.uniform();
        ModelSpec m = physical_jtd_merton();
        m.measure_params = mp;
        const std::size_t n = 200000;
        std::vector<double> ls(n);
        for (std::uint64_t k = 0; k < n; ++k) {
            SubstreamRng rng(900 + static_cast<std::uint64_t>(trial), k);
            const RatePath path = simulate_rate(m, 0.05, 0, 1.0, 1.0 / 64.0, rng);
            ls[k] = radon_nikodym_on_path(mp, m, path);
        }
        const MeanStdErr s = summarize(ls);
        CHECK(std::fabs(s.mean - 1.0) <= 3.0 * s.stderr_);
    }
}

TEST_CASE("importance sampling identity E_P[L g] = E_Q[g]") {
    // g = discounted payoff of the bond, Merton with diffusion, T = 0.5
    ModelSpec p_model = physical_jtd_merton();
    const ModelSpec q_model = to_risk_neutral(p_model);
    const double horizon = 0.5;
    const double step = 1.0 / 128.0;
    const std::size_t n = 400000;

    std::vector<double> weighted(n), direct(n);
    for (std::uint64_t k = 0; k < n; ++k) {
        SubstreamRng rng_p(71, k);
        const RatePath path = simulate_rate(p_model, 0.05, 0, horizon, step, rng_p);
        weighted[k] = radon_nikodym_on_path(p_model.measure_params, p_model, path) *
                      std::exp(-path.integral_end());
        SubstreamRng rng_q(72, k);
        const RatePath qpath = simulate_rate(q_model, 0.05, 0, horizon, step, rng_q);
        direct[k] = std::exp(-qpath.integral_end());
    }
    const MeanStdErr sw = summarize(weighted);
    const MeanStdErr sd = summarize(direct);
    const double combined = std::sqrt(sw.stderr_ * sw.stderr_ + sd.stderr_ * sd.stderr_);
    CHECK(std::fabs(sw.mean - sd.mean) <= 3.0 * combined);
}
