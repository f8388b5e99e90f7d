#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace jtrates {

/// Order-independent summation: fixed recursive splitting, so the result is
/// identical no matter how the inputs were produced.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 16) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

struct MeanStdErr {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t count = 0;
};

inline MeanStdErr summarize(std::span<const double> v) {
    MeanStdErr out;
    out.count = v.size();
    if (v.empty()) return out;
    out.mean = pairwise_sum(v) / static_cast<double>(v.size());
    if (v.size() < 2) return out;
    std::vector<double> sq(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double d = v[k] - out.mean;
        sq[k] = d * d;
    }
    const double var = pairwise_sum(sq) / static_cast<double>(v.size() - 1);
    out.stderr_ = std::sqrt(var / static_cast<double>(v.size()));
    return out;
}

} // namespace jtrates
