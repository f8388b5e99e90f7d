#pragma once

#include <cmath>
#include <cstdint>

namespace jtrates {

namespace detail {

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

/// Counter-based random stream keyed by (seed, stream). Each key yields an
/// independent, reproducible sequence, so Monte Carlo loops can draw one
/// substream per path and stay bit-identical under any parallel schedule.
class SubstreamRng {
public:
    SubstreamRng(std::uint64_t seed, std::uint64_t stream)
        : key_(detail::mix64(seed + 0x9e3779b97f4a7c15ULL) ^
               detail::mix64(stream * 0xbf58476d1ce4e5b9ULL + 0x94d049bb133111ebULL)) {}

    std::uint64_t next_u64() {
        counter_ += 0x9e3779b97f4a7c15ULL;
        return detail::mix64(key_ ^ counter_);
    }

    /// Uniform draw in (0, 1]; never returns 0, safe to pass to log().
    double uniform() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Exponential holding time by inverse CDF.
    double exponential(double rate) {
        return -std::log(uniform()) / rate;
    }

    /// Standard normal via Box-Muller (single value, no cached partner).
    double normal() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace jtrates
