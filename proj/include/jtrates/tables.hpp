#pragma once

#include <array>
#include <stdexcept>

#include "jtrates/model.hpp"

namespace jtrates {

/// Built-in benchmark setup: one short-rate model with its published
/// zero-coupon bond prices at four maturities, both regimes, both methods.
struct BenchmarkTable {
    int number = 0;
    ModelSpec model;
    double r0 = 0.05;
    const char* numerical_label = "ODE";
    std::array<double, 4> maturities{1.0 / 12.0, 0.25, 0.5, 1.0};
    // [regime][maturity]
    std::array<std::array<double, 4>, 2> numerical{};
    std::array<std::array<double, 4>, 2> expectation{};
    double numerical_tolerance = 1e-5;
    double expectation_tolerance = 5e-6;
};

inline BenchmarkTable benchmark_table(int n) {
    BenchmarkTable t;
    t.number = n;
    switch (n) {
        case 1:
            t.model = {ModelKind::JtMerton, -0.02, 0.05, 0.0, 0.0, 0.01, -0.02, 1.0, 2.0};
            t.numerical_label = "ODE";
            t.numerical = {{{0.995875, 0.987844, 0.976244, 0.954317},
                            {0.995811, 0.987358, 0.974689, 0.950064}}};
            t.expectation = {{{0.995875, 0.987843, 0.976239, 0.954264},
                              {0.995811, 0.987355, 0.974672, 0.949927}}};
            t.numerical_tolerance = 1e-5;
            break;
        case 2:
            t.model = {ModelKind::JtDothan, -0.1, 0.25, 0.0, 0.0, 0.1, -0.2, 1.0, 2.0};
            t.numerical_label = "Finite Differences";
            t.numerical = {{{0.995842, 0.987594, 0.975430, 0.951962},
                            {0.995869, 0.987786, 0.976039, 0.953645}}};
            t.expectation = {{{0.995843, 0.987596, 0.975431, 0.951955},
                              {0.995867, 0.987781, 0.976029, 0.953615}}};
            t.numerical_tolerance = 2e-4;
            break;
        case 3:
            t.model = {ModelKind::JtdMerton, -0.02, 0.05, 0.02, 0.06, 0.01, -0.02, 1.0, 2.0,
                       MeasureTag::RiskNeutral, MeasureParams{1.0, 1.0, 0.5, 1.0}};
            t.numerical_label = "ODE";
            t.numerical = {{{0.995836, 0.987429, 0.974318, 0.945471},
                            {0.995613, 0.985732, 0.968920, 0.930939}}};
            t.expectation = {{{0.995836, 0.987427, 0.974294, 0.945206},
                              {0.995613, 0.985721, 0.968830, 0.930256}}};
            t.numerical_tolerance = 1e-5;
            break;
        case 4:
            t.model = {ModelKind::JtdDothan, -0.1, 0.25, 0.4, 0.4, 0.1, -0.2, 1.0, 2.0,
                       MeasureTag::RiskNeutral, MeasureParams{1.0, 1.0, 1.0, 1.0}};
            t.numerical_label = "Finite Differences";
            t.numerical = {{{0.995774, 0.986965, 0.972865, 0.941475},
                            {0.995798, 0.987161, 0.973544, 0.943588}}};
            t.expectation = {{{0.995773, 0.986959, 0.972844, 0.941334},
                              {0.995797, 0.987156, 0.973522, 0.943434}}};
            t.numerical_tolerance = 2e-4;
            break;
        default:
            throw std::invalid_argument("benchmark_table: table number must be 1..4");
    }
    return t;
}

} // namespace jtrates
