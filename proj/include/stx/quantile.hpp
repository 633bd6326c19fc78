#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "stx/types.hpp"

namespace stx {

namespace detail {

/// Smallest integer >= q*n, guarded against floating noise in the product
/// (q*n for q with a short decimal expansion must not land one off).
inline std::size_t order_statistic_index(double q, std::size_t n) {
    const double y = q * static_cast<double>(n);
    double k = std::ceil(y - 8.0 * std::numeric_limits<double>::epsilon() * y);
    if (k < 1.0) k = 1.0;
    if (k > static_cast<double>(n)) k = static_cast<double>(n);
    return static_cast<std::size_t>(k);
}

}  // namespace detail

/// k-th smallest element with k = ceil(q*n). This convention commutes with
/// strictly increasing transforms and is positively 1-homogeneous, unlike
/// interpolating definitions.
inline double empirical_quantile(std::span<const double> series, double q) {
    require(!series.empty(), errc::invalid_argument, "quantile of empty series");
    require(q > 0.0 && q < 1.0, errc::invalid_argument, "quantile level must be in (0,1)");
    const std::size_t k = detail::order_statistic_index(q, series.size());
    std::vector<double> scratch(series.begin(), series.end());
    std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k - 1),
                     scratch.end());
    return scratch[k - 1];
}

}  // namespace stx
