#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "stx/types.hpp"

namespace stx {

namespace detail {

/// Cardinal cubic B-spline centered at zero, support (-2, 2), peak 2/3.
inline double cubic_bspline(double u) {
    const double a = std::abs(u);
    if (a >= 2.0) return 0.0;
    if (a <= 1.0) return (4.0 - 6.0 * a * a + 3.0 * a * a * a) / 6.0;
    const double b = 2.0 - a;
    return b * b * b / 6.0;
}

}  // namespace detail

/// Periodic cubic B-spline basis with K equispaced knots on [0, period).
/// Basis j peaks at knot j*period/K; the functions wrap smoothly across the
/// period boundary and sum to one at every t.
inline std::vector<double> cyclic_spline_basis(std::size_t k, double period, double t) {
    require(k >= 3, errc::invalid_argument, "cyclic spline basis needs K >= 3");
    require(period > 0.0, errc::invalid_argument, "spline period must be positive");
    double x = std::fmod(t, period);
    if (x < 0.0) x += period;
    x *= static_cast<double>(k) / period;  // knot units in [0, K)
    const int wraps = static_cast<int>(std::ceil(1.0 + 2.0 / static_cast<double>(k)));
    std::vector<double> out(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        double v = 0.0;
        for (int m = -wraps; m <= wraps; ++m) {
            v += detail::cubic_bspline(x - static_cast<double>(j) -
                                       static_cast<double>(m) * static_cast<double>(k));
        }
        out[j] = v;
    }
    return out;
}

}  // namespace stx
