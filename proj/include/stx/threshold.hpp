#pragma once

#include <cmath>
#include <optional>
#include <span>

#include "stx/quantile.hpp"
#include "stx/types.hpp"

namespace stx {

/// Either a quantile level of the risk series or an absolute level u.
/// Exactly one variant is set.
class ThresholdSpec {
public:
    static ThresholdSpec quantile(double level) {
        require(level > 0.0 && level < 1.0, errc::invalid_argument,
                "threshold quantile level must be in (0,1)");
        ThresholdSpec t;
        t.quantile_level_ = level;
        return t;
    }

    static ThresholdSpec absolute(double u) {
        require(std::isfinite(u), errc::non_finite, "threshold must be finite");
        ThresholdSpec t;
        t.absolute_ = u;
        return t;
    }

    bool is_quantile() const noexcept { return quantile_level_.has_value(); }
    double quantile_level() const { return quantile_level_.value(); }

    /// Resolves against the series the exceedances are declared on.
    double resolve(std::span<const double> risk_series) const {
        if (absolute_) return *absolute_;
        return empirical_quantile(risk_series, *quantile_level_);
    }

private:
    ThresholdSpec() = default;
    std::optional<double> quantile_level_;
    std::optional<double> absolute_;
};

}  // namespace stx
