#pragma once

// Test-only numerical oracles, independent of the library's pricing paths.

#include <cmath>
#include <functional>

namespace oracles {

inline double simpson(const std::function<double(double)>& f, double a, double b) {
    const double m = 0.5 * (a + b);
    return (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
}

inline double adaptive_simpson_impl(const std::function<double(double)>& f, double a, double b,
                                    double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double left = simpson(f, a, m);
    const double right = simpson(f, m, b);
    if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_impl(f, a, m, left, tol / 2.0, depth - 1) +
           adaptive_simpson_impl(f, m, b, right, tol / 2.0, depth - 1);
}

/// Adaptive Simpson quadrature of f over [a, b].
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-10) {
    if (a == b) return 0.0;
    return adaptive_simpson_impl(f, a, b, simpson(f, a, b), tol, 40);
}

} // namespace oracles
