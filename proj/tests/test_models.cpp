#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "jtrates/model.hpp"

using namespace jtrates;

namespace {

ModelSpec make_model(ModelKind kind) {
    ModelSpec m;
    m.kind = kind;
    if (is_dothan(kind)) {
        m.mu0 = -0.1;
        m.mu1 = 0.25;
        m.eta0 = 0.1;
        m.eta1 = -0.2;
    } else {
        m.mu0 = -0.02;
        m.mu1 = 0.05;
        m.eta0 = 0.01;
        m.eta1 = -0.02;
    }
    m.lambda0 = 1.0;
    m.lambda1 = 2.0;
    if (is_diffusive(kind)) {
        if (is_dothan(kind)) {
            m.sigma0 = m.sigma1 = 0.4;
            m.measure_params = MeasureParams{1.0, 1.0, 1.0, 1.0};
        } else {
            m.sigma0 = 0.02;
            m.sigma1 = 0.06;
            m.measure_params = MeasureParams{1.0, 1.0, 0.5, 1.0};
        }
    }
    m.measure = MeasureTag::RiskNeutral;
    return m;
}

const std::vector<ModelKind> kAllKinds = {ModelKind::JtMerton, ModelKind::JtDothan,
                                          ModelKind::JtdMerton, ModelKind::JtdDothan};

} // namespace

TEST_CASE("validation rejects inconsistent specs") {
    ModelSpec m = make_model(ModelKind::JtMerton);
    m.sigma0 = 0.1;
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);

    ModelSpec d = make_model(ModelKind::JtdMerton);
    d.sigma0 = d.sigma1 = 0.0;
    CHECK_THROWS_AS(d.validate(), std::invalid_argument);

    ModelSpec bad_eta = make_model(ModelKind::JtDothan);
    bad_eta.eta1 = -1.0;
    CHECK_THROWS_AS(bad_eta.validate(), std::invalid_argument);

    ModelSpec bad_lam = make_model(ModelKind::JtMerton);
    bad_lam.lambda0 = 0.0;
    CHECK_THROWS_AS(bad_lam.validate(), std::invalid_argument);
}

TEST_CASE("zero horizon returns the initial state") {
    for (ModelKind kind : kAllKinds) {
        SubstreamRng rng(1, 0);
        const RatePath path = simulate_rate(make_model(kind), 0.05, 1, 0.0, 1.0 / 16, rng);
        CHECK(path.rate_end() == 0.05);
        CHECK(path.integral_end() == 0.0);
        CHECK(expected_future_rate(make_model(kind), 1, 0.05, 0.0) == doctest::Approx(0.05).epsilon(1e-15));
    }
}

TEST_CASE("Dothan kinds keep r identically zero from r0 = 0") {
    for (ModelKind kind : {ModelKind::JtDothan, ModelKind::JtdDothan}) {
        SubstreamRng rng(2, 0);
        const RatePath path = simulate_rate(make_model(kind), 0.0, 0, 2.0, 1.0 / 16, rng);
        for (double r : path.rates) CHECK(r == 0.0);
        CHECK(path.integral_end() == 0.0);
        CHECK(expected_future_rate(make_model(kind), 0, 0.0, 2.0) == 0.0);
    }
}

TEST_CASE("Dothan paths stay positive") {
    for (ModelKind kind : {ModelKind::JtDothan, ModelKind::JtdDothan})
        for (std::uint64_t k = 0; k < 500; ++k) {
            SubstreamRng rng(3, k);
            const RatePath path = simulate_rate(make_model(kind), 0.05, 0, 2.0, 1.0 / 16, rng);
            for (double r : path.rates) CHECK(r > 0.0);
        }
}

TEST_CASE("path bookkeeping invariants") {
    for (ModelKind kind : kAllKinds)
        for (std::uint64_t k = 0; k < 200; ++k) {
            SubstreamRng rng(4, k);
            const ModelSpec m = make_model(kind);
            const RatePath path = simulate_rate(m, 0.05, static_cast<int>(k % 2), 1.5, 1.0 / 32, rng);
            REQUIRE(path.times.size() == path.rates.size());
            REQUIRE(path.times.size() == path.regimes.size());
            REQUIRE(path.times.size() == path.integrals.size());
            if (m.diffusive()) REQUIRE(path.wiener.size() == path.times.size() - 1);
            for (std::size_t j = 1; j < path.times.size(); ++j)
                CHECK(path.times[j] >= path.times[j - 1]);
            CHECK(path.times.back() == 1.5);
            for (std::size_t node : path.switch_nodes) {
                REQUIRE(node >= 1);
                CHECK(path.times[node] == path.times[node - 1]); // jump happens at an instant
                CHECK(path.regimes[node] == 1 - path.regimes[node - 1]);
            }
        }
}

TEST_CASE("sampled mean of r_T matches the closed form for every kind") {
    // r_T is exact in distribution at any step for all four schemes, so a
    // coarse grid keeps this affordable.
    const std::size_t n = 1'000'000;
    for (ModelKind kind : kAllKinds) {
        const ModelSpec m = make_model(kind);
        for (double tau : {1.0 / 12.0, 1.0}) {
            for (int i : {0, 1}) {
                std::vector<double> rs(n);
                for (std::uint64_t k = 0; k < n; ++k) {
                    SubstreamRng rng(40 + static_cast<std::uint64_t>(kind), k);
                    rs[k] = simulate_rate(m, 0.05, i, tau, 0.25, rng).rate_end();
                }
                const MeanStdErr s = summarize(rs);
                const double exact = expected_future_rate(m, i, 0.05, tau);
                CHECK(std::fabs(s.mean - exact) <= 3.0 * s.stderr_);
            }
        }
    }
}

TEST_CASE("expected rate is unaffected by volatility when psi = 0") {
    ModelSpec base = make_model(ModelKind::JtMerton);
    ModelSpec diff = make_model(ModelKind::JtdMerton);
    diff.measure_params = MeasureParams{1.0, 1.0, 0.0, 0.0};
    for (double tau : {0.25, 1.0, 2.0})
        for (int i : {0, 1})
            CHECK(expected_future_rate(diff, i, 0.05, tau) ==
                  doctest::Approx(expected_future_rate(base, i, 0.05, tau)).epsilon(1e-13));

    ModelSpec dbase = make_model(ModelKind::JtDothan);
    ModelSpec ddiff = make_model(ModelKind::JtdDothan);
    ddiff.measure_params = MeasureParams{1.0, 1.0, 0.0, 0.0};
    for (double tau : {0.25, 1.0, 2.0})
        for (int i : {0, 1})
            CHECK(expected_future_rate(ddiff, i, 0.05, tau) ==
                  doctest::Approx(expected_future_rate(dbase, i, 0.05, tau)).epsilon(1e-12));
}

TEST_CASE("jtd_dothan closed form rejects unequal volatilities") {
    ModelSpec m = make_model(ModelKind::JtdDothan);
    m.sigma1 = 0.5;
    CHECK_THROWS_AS(expected_future_rate(m, 0, 0.05, 1.0), std::invalid_argument);
}

TEST_CASE("discount factor is insensitive to step halving") {
    for (ModelKind kind : {ModelKind::JtdMerton, ModelKind::JtdDothan}) {
        const ModelSpec m = make_model(kind);
        const std::size_t n = 200000;
        MeanStdErr stats[2];
        int slot = 0;
        for (double step : {1.0 / 32.0, 1.0 / 64.0}) {
            std::vector<double> vals(n);
            for (std::uint64_t k = 0; k < n; ++k) {
                SubstreamRng rng(60 + static_cast<std::uint64_t>(kind), k);
                vals[k] = std::exp(-simulate_rate(m, 0.05, 0, 1.0, step, rng).integral_end());
            }
            stats[slot++] = summarize(vals);
        }
        // common random numbers for the regime skeleton keep these close
        const double combined =
            std::sqrt(stats[0].stderr_ * stats[0].stderr_ + stats[1].stderr_ * stats[1].stderr_);
        CHECK(std::fabs(stats[0].mean - stats[1].mean) <= 3.0 * combined + 1e-5);
    }
}
