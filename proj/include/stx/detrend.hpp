#pragma once

#include <Eigen/Core>
#include <Eigen/QR>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "stx/field_series.hpp"
#include "stx/grid.hpp"
#include "stx/parallel.hpp"
#include "stx/spline.hpp"
#include "stx/types.hpp"

namespace stx {

struct RegressionConfig {
    std::size_t n_seasonal_basis = 12;
    double period = 365.25;
    double pooling_radius_km = 30.0;

    void validate() const {
        require(n_seasonal_basis >= 3, errc::invalid_argument, "need at least 3 seasonal basis functions");
        require(period > 0.0, errc::invalid_argument, "period must be positive");
        require(pooling_radius_km >= 0.0, errc::invalid_argument, "pooling radius must be >= 0");
    }
};

/// Per-site regression coefficients in original time units. The seasonal
/// coefficients sum to zero: the basis is a partition of unity, so their
/// common mean is not identifiable next to the intercept and is pinned to
/// zero by a sum-to-zero contrast during fitting.
struct SiteCoefficients {
    double intercept = 0.0;
    double trend = 0.0;
    std::vector<double> seasonal;

    double fitted(double t, const std::vector<double>& basis_at_t) const {
        double v = intercept + trend * t;
        for (std::size_t j = 0; j < seasonal.size(); ++j) v += seasonal[j] * basis_at_t[j];
        return v;
    }
};

namespace detail {

struct DetrendDesign {
    Eigen::MatrixXd design;              // [1, t_scaled, psi_1 - psi_K, ..., psi_{K-1} - psi_K]
    std::vector<std::vector<double>> basis;  // per time, K basis values
    std::size_t k = 0;
    std::size_t n = 0;
};

inline DetrendDesign build_design(std::size_t n_times, const RegressionConfig& cfg) {
    DetrendDesign d;
    d.k = cfg.n_seasonal_basis;
    d.n = n_times;
    d.basis.resize(n_times);
    d.design.resize(static_cast<Eigen::Index>(n_times), static_cast<Eigen::Index>(d.k + 1));
    const double half = n_times > 1 ? static_cast<double>(n_times - 1) / 2.0 : 1.0;
    for (std::size_t t = 0; t < n_times; ++t) {
        d.basis[t] = cyclic_spline_basis(d.k, cfg.period, static_cast<double>(t));
        const Eigen::Index row = static_cast<Eigen::Index>(t);
        d.design(row, 0) = 1.0;
        d.design(row, 1) = (static_cast<double>(t) - half) / half;  // scaled to [-1, 1]
        const double last = d.basis[t][d.k - 1];
        for (std::size_t j = 0; j + 1 < d.k; ++j) {
            d.design(row, static_cast<Eigen::Index>(j + 2)) = d.basis[t][j] - last;
        }
    }
    return d;
}

inline SiteCoefficients coefficients_from_solution(const Eigen::VectorXd& beta, std::size_t k,
                                                   std::size_t n_times) {
    SiteCoefficients c;
    const double half = n_times > 1 ? static_cast<double>(n_times - 1) / 2.0 : 1.0;
    c.trend = beta(1) / half;
    c.intercept = beta(0) - beta(1);  // t_scaled = (t - half)/half = t/half - 1
    c.seasonal.resize(k);
    double sum = 0.0;
    for (std::size_t j = 0; j + 1 < k; ++j) {
        c.seasonal[j] = beta(static_cast<Eigen::Index>(j + 2));
        sum += c.seasonal[j];
    }
    c.seasonal[k - 1] = -sum;
    return c;
}

}  // namespace detail

/// Pooled least squares for one target site: all sites of the neighborhood
/// enter with equal weight and share the design, so the stacked regression
/// collapses to ordinary least squares on the neighborhood mean series.
inline SiteCoefficients fit_site(const FieldSeries& series, std::size_t target,
                                 const std::vector<std::size_t>& neighborhood,
                                 const RegressionConfig& cfg) {
    cfg.validate();
    require(!neighborhood.empty(), errc::invalid_argument, "empty pooling neighborhood");
    const auto design = detail::build_design(series.n_times(), cfg);
    Eigen::VectorXd y(static_cast<Eigen::Index>(series.n_times()));
    for (std::size_t t = 0; t < series.n_times(); ++t) {
        double s = 0.0;
        for (std::size_t site : neighborhood) s += series.at(t, site);
        y(static_cast<Eigen::Index>(t)) = s / static_cast<double>(neighborhood.size());
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design.design);
    require(qr.rank() == design.design.cols(), errc::rank_deficient,
            "detrend design matrix is rank deficient at site " + std::to_string(target));
    return detail::coefficients_from_solution(qr.solve(y), design.k, series.n_times());
}

inline std::vector<std::size_t> pooling_neighborhood(const SpatialGrid& grid, std::size_t target,
                                                     double radius_km) {
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < grid.site_count(); ++s) {
        if (grid.distance_km(target, s) <= radius_km) out.push_back(s);
    }
    return out;
}

/// Fits every site, pooling observations from grid cells within the
/// configured radius of the target site. Sites are independent, so the loop
/// parallelizes with each site writing only its own slot.
inline std::vector<SiteCoefficients> fit_all_sites(const FieldSeries& series,
                                                   const RegressionConfig& cfg,
                                                   std::size_t threads = 1) {
    cfg.validate();
    const auto design = detail::build_design(series.n_times(), cfg);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design.design);
    require(qr.rank() == design.design.cols(), errc::rank_deficient,
            "detrend design matrix is rank deficient at site 0");
    const std::size_t S = series.site_count();
    std::vector<SiteCoefficients> out(S);
    parallel_for_index(S, threads, [&](std::size_t target) {
        const auto hood = pooling_neighborhood(series.grid(), target, cfg.pooling_radius_km);
        Eigen::VectorXd y(static_cast<Eigen::Index>(series.n_times()));
        for (std::size_t t = 0; t < series.n_times(); ++t) {
            double s = 0.0;
            for (std::size_t site : hood) s += series.at(t, site);
            y(static_cast<Eigen::Index>(t)) = s / static_cast<double>(hood.size());
        }
        out[target] = detail::coefficients_from_solution(qr.solve(y), design.k, series.n_times());
    });
    return out;
}

/// Observed value minus the fitted site mean at every (t, s); the residual
/// field the cluster estimators run on.
inline FieldSeries anomalies(const FieldSeries& raw, const std::vector<SiteCoefficients>& coeffs,
                             const RegressionConfig& cfg) {
    cfg.validate();
    require(coeffs.size() == raw.site_count(), errc::invalid_argument,
            "coefficient count must match site count");
    const std::size_t S = raw.site_count();
    std::vector<double> values(raw.n_times() * S);
    for (std::size_t t = 0; t < raw.n_times(); ++t) {
        const auto basis = cyclic_spline_basis(cfg.n_seasonal_basis, cfg.period,
                                               static_cast<double>(t));
        for (std::size_t s = 0; s < S; ++s) {
            values[t * S + s] = raw.at(t, s) - coeffs[s].fitted(static_cast<double>(t), basis);
        }
    }
    return FieldSeries(raw.grid_ptr(), raw.n_times(), std::move(values));
}

}  // namespace stx
