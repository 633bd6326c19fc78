#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stx/grid.hpp"
#include "stx/quantile.hpp"
#include "stx/types.hpp"

namespace stx {

/// Continuous, positively 1-homogeneous reduction of a spatial field to a
/// scalar. The median is the 0.5-quantile; quantiles are the ceil(p*N)
/// order statistic over sites.
struct RiskFunctional {
    enum class Kind { max, min, mean, median, quantile };

    Kind kind = Kind::mean;
    double p = 0.0;  // set iff kind == quantile

    static RiskFunctional max() { return {Kind::max, 0.0}; }
    static RiskFunctional min() { return {Kind::min, 0.0}; }
    static RiskFunctional mean() { return {Kind::mean, 0.0}; }
    static RiskFunctional median() { return {Kind::median, 0.0}; }
    static RiskFunctional quantile(double p) {
        require(p > 0.0 && p < 1.0, errc::invalid_argument,
                "spatial quantile level must be in (0,1)");
        return {Kind::quantile, p};
    }

    /// True for the kinds that commute with strictly increasing marginal
    /// transforms (all but the mean).
    bool order_based() const noexcept { return kind != Kind::mean; }

    std::string name() const {
        switch (kind) {
            case Kind::max: return "max";
            case Kind::min: return "min";
            case Kind::mean: return "mean";
            case Kind::median: return "median";
            case Kind::quantile: return "quantile(" + std::to_string(p) + ")";
        }
        return "?";
    }
};

inline double apply_risk(const RiskFunctional& r, std::span<const double> field) {
    require(!field.empty(), errc::invalid_argument, "risk functional of empty field");
    switch (r.kind) {
        case RiskFunctional::Kind::max:
            return *std::max_element(field.begin(), field.end());
        case RiskFunctional::Kind::min:
            return *std::min_element(field.begin(), field.end());
        case RiskFunctional::Kind::mean: {
            double s = 0.0;
            for (double v : field) s += v;
            return s / static_cast<double>(field.size());
        }
        case RiskFunctional::Kind::median:
            return empirical_quantile(field, 0.5);
        case RiskFunctional::Kind::quantile:
            return empirical_quantile(field, r.p);
    }
    raise(errc::invalid_argument, "unknown risk functional");
}

/// Normalized exposure-weighted size of the pointwise exceedance region.
/// With unit exposure this is the fraction of sites above u.
struct SpatialRiskMeasure {
    std::vector<double> exposure;  // empty means unit exposure everywhere

    void validate(std::size_t site_count) const {
        if (exposure.empty()) return;
        require(exposure.size() == site_count, errc::invalid_argument,
                "exposure length must match site count");
        bool any_positive = false;
        for (double e : exposure) {
            require(std::isfinite(e) && e >= 0.0, errc::invalid_argument,
                    "exposure weights must be finite and nonnegative");
            any_positive = any_positive || e > 0.0;
        }
        require(any_positive, errc::invalid_argument, "at least one exposure weight must be positive");
    }
};

inline double spatial_risk(const SpatialRiskMeasure& m, std::span<const double> field, double u) {
    const std::size_t n = field.size();
    double s = 0.0;
    if (m.exposure.empty()) {
        for (double v : field) s += (v > u) ? 1.0 : 0.0;
    } else {
        for (std::size_t i = 0; i < n; ++i) s += (field[i] > u) ? m.exposure[i] : 0.0;
    }
    return s / static_cast<double>(n);
}

/// Summary position of the exceedance region. UNDEFINED (nullopt) when no
/// site exceeds u, mirroring the formal value "infinity" of an empty region.
struct LocationMeasure {
    enum class Kind { peak, exceedance_centroid, weighted_centroid, componentwise_median };
    Kind kind = Kind::exceedance_centroid;

    std::string name() const {
        switch (kind) {
            case Kind::peak: return "peak";
            case Kind::exceedance_centroid: return "exceedance_centroid";
            case Kind::weighted_centroid: return "weighted_centroid";
            case Kind::componentwise_median: return "componentwise_median";
        }
        return "?";
    }
};

inline std::optional<Coord> locate(const LocationMeasure& c, const SpatialGrid& grid,
                                   std::span<const double> field, double u) {
    require(field.size() == grid.site_count(), errc::invalid_argument,
            "field length must match site count");
    std::size_t n_exceed = 0;
    for (double v : field) n_exceed += (v > u) ? 1 : 0;
    if (n_exceed == 0) return std::nullopt;

    switch (c.kind) {
        case LocationMeasure::Kind::peak: {
            std::size_t best = 0;
            for (std::size_t i = 1; i < field.size(); ++i) {
                if (field[i] > field[best]) best = i;  // first index wins ties
            }
            return grid.site(best);
        }
        case LocationMeasure::Kind::exceedance_centroid: {
            double sx = 0.0, sy = 0.0;
            for (std::size_t i = 0; i < field.size(); ++i) {
                if (field[i] > u) {
                    sx += grid.site(i).x;
                    sy += grid.site(i).y;
                }
            }
            const double m = static_cast<double>(n_exceed);
            return Coord{sx / m, sy / m};
        }
        case LocationMeasure::Kind::weighted_centroid: {
            // Anomaly fields may be negative; weights are clipped at zero.
            double sw = 0.0, sx = 0.0, sy = 0.0;
            for (std::size_t i = 0; i < field.size(); ++i) {
                const double w = std::max(field[i], 0.0);
                sw += w;
                sx += w * grid.site(i).x;
                sy += w * grid.site(i).y;
            }
            if (sw <= 0.0) return std::nullopt;
            return Coord{sx / sw, sy / sw};
        }
        case LocationMeasure::Kind::componentwise_median: {
            std::vector<double> xs, ys;
            xs.reserve(n_exceed);
            ys.reserve(n_exceed);
            for (std::size_t i = 0; i < field.size(); ++i) {
                if (field[i] > u) {
                    xs.push_back(grid.site(i).x);
                    ys.push_back(grid.site(i).y);
                }
            }
            return Coord{empirical_quantile(xs, 0.5), empirical_quantile(ys, 0.5)};
        }
    }
    raise(errc::invalid_argument, "unknown location measure");
}

}  // namespace stx
