#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "stx/detrend.hpp"
#include "stx/field_series.hpp"
#include "stx/rng.hpp"
#include "stx/spline.hpp"

namespace {

stx::GridPtr make_grid(std::size_t rows, std::size_t cols, double spacing_km) {
    return std::make_shared<stx::SpatialGrid>(stx::SpatialGrid::regular(rows, cols, spacing_km));
}

// model evaluation used to synthesize test data
double model_value(const stx::SiteCoefficients& c, double t, std::size_t k, double period) {
    return c.fitted(t, stx::cyclic_spline_basis(k, period, t));
}

}  // namespace

TEST(CyclicSplineBasis, PartitionOfUnity) {
    stx::Rng rng(5);
    for (std::size_t k : {3u, 4u, 12u}) {
        for (int rep = 0; rep < 100; ++rep) {
            const double t = 2000.0 * rng.uniform() - 500.0;
            const auto b = stx::cyclic_spline_basis(k, 365.25, t);
            double sum = 0.0;
            for (double v : b) {
                EXPECT_GE(v, 0.0);
                sum += v;
            }
            EXPECT_NEAR(sum, 1.0, 1e-12);
        }
    }
}

TEST(CyclicSplineBasis, PeriodicAcrossTheBoundary) {
    const double period = 365.25;
    for (double t : {0.0, 10.5, 200.0, 365.0}) {
        const auto a = stx::cyclic_spline_basis(12, period, t);
        const auto b = stx::cyclic_spline_basis(12, period, t + period);
        for (std::size_t j = 0; j < 12; ++j) EXPECT_NEAR(a[j], b[j], 1e-12);
    }
}

TEST(CyclicSplineBasis, KnotOwnsItsPeak) {
    const std::size_t k = 12;
    const double period = 365.25;
    for (std::size_t j = 0; j < k; ++j) {
        const double knot = period * static_cast<double>(j) / static_cast<double>(k);
        const auto b = stx::cyclic_spline_basis(k, period, knot);
        std::size_t argmax = 0;
        for (std::size_t i = 1; i < k; ++i) {
            if (b[i] > b[argmax]) argmax = i;
        }
        EXPECT_EQ(argmax, j);
        EXPECT_NEAR(b[j], 2.0 / 3.0, 1e-12);  // cardinal cubic B-spline peak
    }
}

TEST(FitSite, ConstantSeriesIsAbsorbedByTheIntercept) {
    auto grid = make_grid(1, 1, 10.0);
    const std::size_t n = 400;
    const stx::FieldSeries series(grid, n, std::vector<double>(n, 3.25));
    stx::RegressionConfig cfg;
    cfg.pooling_radius_km = 0.0;
    const auto c = stx::fit_site(series, 0, {0}, cfg);
    EXPECT_NEAR(c.intercept, 3.25, 1e-10);
    EXPECT_NEAR(c.trend, 0.0, 1e-12);
    for (double s : c.seasonal) EXPECT_NEAR(s, 0.0, 1e-10);
}

TEST(FitSite, RecoversKnownCoefficients) {
    auto grid = make_grid(1, 1, 10.0);
    const std::size_t n = 2000, k = 12;
    stx::RegressionConfig cfg;
    cfg.pooling_radius_km = 0.0;
    stx::SiteCoefficients truth;
    truth.intercept = 4.0;
    truth.trend = 0.001;
    truth.seasonal = {1.2, 0.8, 0.1, -0.5, -1.1, -0.9, -0.4, 0.2, 0.5, 0.3, 0.0, -0.2};
    double sum = 0.0;
    for (double s : truth.seasonal) sum += s;
    ASSERT_NEAR(sum, 0.0, 1e-12);  // identifiable representative
    std::vector<double> values(n);
    for (std::size_t t = 0; t < n; ++t) {
        values[t] = model_value(truth, static_cast<double>(t), k, cfg.period);
    }
    const stx::FieldSeries series(grid, n, values);
    const auto c = stx::fit_site(series, 0, {0}, cfg);
    EXPECT_NEAR(c.intercept, truth.intercept, 1e-8);
    EXPECT_NEAR(c.trend, truth.trend, 1e-8);
    for (std::size_t j = 0; j < k; ++j) EXPECT_NEAR(c.seasonal[j], truth.seasonal[j], 1e-8);
}

TEST(FitSite, PoolingDuplicateSitesChangesNothing) {
    auto grid = std::make_shared<stx::SpatialGrid>(
        stx::SpatialGrid({{0.0, 0.0}, {0.1, 0.0}}, stx::CoordSystem::planar_km));
    const std::size_t n = 600;
    stx::Rng rng(9);
    std::vector<double> values(2 * n);
    for (std::size_t t = 0; t < n; ++t) {
        const double v = std::sin(0.017 * static_cast<double>(t)) + rng.normal() * 0.1;
        values[t * 2] = v;
        values[t * 2 + 1] = v;  // identical neighbor
    }
    const stx::FieldSeries series(grid, n, values);
    stx::RegressionConfig cfg;
    const auto alone = stx::fit_site(series, 0, {0}, cfg);
    const auto pooled = stx::fit_site(series, 0, {0, 1}, cfg);
    EXPECT_NEAR(alone.intercept, pooled.intercept, 1e-12);
    EXPECT_NEAR(alone.trend, pooled.trend, 1e-12);
    for (std::size_t j = 0; j < 12; ++j)
        EXPECT_NEAR(alone.seasonal[j], pooled.seasonal[j], 1e-12);
}

TEST(FitAllSites, RankDeficiencyIsReportedWithTheSite) {
    auto grid = make_grid(1, 1, 10.0);
    const stx::FieldSeries series(grid, 5, std::vector<double>(5, 1.0));  // 5 rows, 13 columns
    try {
        stx::fit_all_sites(series, stx::RegressionConfig{});
        FAIL() << "expected rank deficiency";
    } catch (const stx::Error& e) {
        EXPECT_EQ(e.code(), stx::errc::rank_deficient);
        EXPECT_NE(std::string(e.what()).find("site"), std::string::npos);
    }
}

TEST(Anomalies, ExactModelDataLeavesNoResidual) {
    auto grid = make_grid(2, 2, 10.0);
    const std::size_t n = 1200, k = 12;
    stx::RegressionConfig cfg;
    cfg.pooling_radius_km = 0.0;
    stx::Rng rng(31);
    std::vector<stx::SiteCoefficients> truth(4);
    std::vector<double> values(4 * n);
    for (std::size_t s = 0; s < 4; ++s) {
        truth[s].intercept = rng.normal();
        truth[s].trend = 0.002 * rng.normal();
        truth[s].seasonal.resize(k);
        double sum = 0.0;
        for (std::size_t j = 0; j + 1 < k; ++j) {
            truth[s].seasonal[j] = rng.normal();
            sum += truth[s].seasonal[j];
        }
        truth[s].seasonal[k - 1] = -sum;
    }
    for (std::size_t t = 0; t < n; ++t) {
        const auto basis = stx::cyclic_spline_basis(k, cfg.period, static_cast<double>(t));
        for (std::size_t s = 0; s < 4; ++s) {
            values[t * 4 + s] = truth[s].fitted(static_cast<double>(t), basis);
        }
    }
    const stx::FieldSeries series(grid, n, values);
    const auto coeffs = stx::fit_all_sites(series, cfg);
    const auto anom = stx::anomalies(series, coeffs, cfg);
    for (double v : anom.values()) EXPECT_NEAR(v, 0.0, 1e-8);
}

TEST(Anomalies, ConstantShiftMovesOnlyTheIntercept) {
    auto grid = make_grid(1, 2, 5.0);
    const std::size_t n = 800;
    stx::Rng rng(77);
    std::vector<double> values(2 * n);
    for (auto& v : values) v = rng.normal();
    const stx::FieldSeries series(grid, n, values);
    std::vector<double> shifted(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) shifted[i] = values[i] + 13.5;
    const stx::FieldSeries series_shifted(grid, n, shifted);
    stx::RegressionConfig cfg;
    const auto a = stx::fit_all_sites(series, cfg);
    const auto b = stx::fit_all_sites(series_shifted, cfg);
    for (std::size_t s = 0; s < 2; ++s) {
        EXPECT_NEAR(b[s].intercept - a[s].intercept, 13.5, 1e-9);
        EXPECT_NEAR(b[s].trend, a[s].trend, 1e-12);
    }
    const auto anom_a = stx::anomalies(series, a, cfg);
    const auto anom_b = stx::anomalies(series_shifted, b, cfg);
    for (std::size_t i = 0; i < anom_a.values().size(); ++i) {
        EXPECT_NEAR(anom_a.values()[i], anom_b.values()[i], 1e-9);
    }
}

TEST(Anomalies, UnpooledResidualsAverageToZeroPerSite) {
    auto grid = make_grid(2, 2, 100.0);  // spacing beyond the pooling radius
    const std::size_t n = 1000;
    stx::Rng rng(41);
    std::vector<double> values(4 * n);
    for (auto& v : values) v = 2.0 + rng.normal();
    const stx::FieldSeries series(grid, n, values);
    stx::RegressionConfig cfg;  // 30 km radius finds only the site itself
    const auto coeffs = stx::fit_all_sites(series, cfg);
    const auto anom = stx::anomalies(series, coeffs, cfg);
    for (std::size_t s = 0; s < 4; ++s) {
        double mean = 0.0;
        for (std::size_t t = 0; t < n; ++t) mean += anom.at(t, s);
        mean /= static_cast<double>(n);
        EXPECT_NEAR(mean, 0.0, 1e-8);
    }
}

TEST(PoolingNeighborhood, UsesGreatCircleDistancesOnLonlatGrids) {
    // 0.1 degrees of latitude is about 11 km; 1.0 degrees is about 111 km
    const stx::SpatialGrid g({{40.0, 17.0}, {40.0, 17.1}, {40.0, 18.0}},
                             stx::CoordSystem::lonlat);
    const auto hood = stx::pooling_neighborhood(g, 0, 30.0);
    EXPECT_EQ(hood, (std::vector<std::size_t>{0, 1}));
    const auto wide = stx::pooling_neighborhood(g, 0, 120.0);
    EXPECT_EQ(wide.size(), 3u);
    const auto self_only = stx::pooling_neighborhood(g, 0, 0.0);
    EXPECT_EQ(self_only, (std::vector<std::size_t>{0}));
}

TEST(Detrend, PipelineIsDeterministic) {
    auto grid = make_grid(2, 3, 8.0);
    const std::size_t n = 500;
    stx::Rng rng(53);
    std::vector<double> values(6 * n);
    for (auto& v : values) v = rng.normal();
    const stx::FieldSeries series(grid, n, values);
    stx::RegressionConfig cfg;
    cfg.pooling_radius_km = 10.0;
    const auto a = stx::anomalies(series, stx::fit_all_sites(series, cfg), cfg);
    const auto b = stx::anomalies(series, stx::fit_all_sites(series, cfg), cfg);
    EXPECT_EQ(a.values(), b.values());
    // parallel site fitting writes per-site slots and changes nothing
    const auto c = stx::anomalies(series, stx::fit_all_sites(series, cfg, 3), cfg);
    EXPECT_EQ(a.values(), c.values());
}
