#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "stx/field_series.hpp"
#include "stx/grid.hpp"
#include "stx/ordinal.hpp"
#include "stx/quantile.hpp"
#include "stx/rng.hpp"
#include "stx/threshold.hpp"

using stx::empirical_quantile;
using stx::ordinal_pattern;

TEST(OrdinalPattern, RankExamples) {
    const std::vector<double> v{2.1, 0.5, 3.3};
    const auto p = ordinal_pattern(v);
    EXPECT_FALSE(p.tie);
    EXPECT_EQ(p.ranks, (std::vector<int>{2, 1, 3}));

    // a window that is itself a permutation maps to itself
    const std::vector<double> id{1, 2, 3};
    EXPECT_EQ(ordinal_pattern(id).ranks, (std::vector<int>{1, 2, 3}));
    const std::vector<double> perm{3, 1, 4, 2};
    EXPECT_EQ(ordinal_pattern(perm).ranks, (std::vector<int>{3, 1, 4, 2}));
}

TEST(OrdinalPattern, ExactTiesAreFlagged) {
    const std::vector<double> v{5.0, 5.0};
    const auto p = ordinal_pattern(v);
    EXPECT_TRUE(p.tie);
    EXPECT_TRUE(p.ranks.empty());
    EXPECT_EQ(stx::pattern_label(p), "ties");
}

TEST(OrdinalPattern, RejectsShortWindows) {
    const std::vector<double> v{1.0};
    EXPECT_THROW(ordinal_pattern(v), stx::Error);
}

TEST(OrdinalPattern, InvariantUnderIncreasingTransforms) {
    stx::Rng rng(7);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> v(2 + rep % 4);
        for (auto& x : v) x = 2.0 * rng.uniform() - 1.0;
        const auto base = ordinal_pattern(v);
        if (base.tie) continue;
        std::vector<double> cubed(v.size()), exped(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            cubed[i] = v[i] * v[i] * v[i];
            exped[i] = std::exp(v[i]);
        }
        EXPECT_EQ(ordinal_pattern(cubed).ranks, base.ranks);
        EXPECT_EQ(ordinal_pattern(exped).ranks, base.ranks);
    }
}

TEST(OrdinalPattern, TieFreeWindowsGiveValidPermutations) {
    stx::Rng rng(13);
    for (int rep = 0; rep < 500; ++rep) {
        std::vector<double> v(3);
        for (auto& x : v) x = rng.uniform();
        const auto p = ordinal_pattern(v);
        ASSERT_FALSE(p.tie);
        std::vector<int> sorted = p.ranks;
        std::sort(sorted.begin(), sorted.end());
        EXPECT_EQ(sorted, (std::vector<int>{1, 2, 3}));
    }
}

TEST(EmpiricalQuantile, OrderStatisticExamples) {
    std::vector<double> v(100);
    for (int i = 0; i < 100; ++i) v[static_cast<std::size_t>(i)] = i + 1;
    EXPECT_DOUBLE_EQ(empirical_quantile(v, 0.95), 95.0);

    const std::vector<double> single{7.0};
    EXPECT_DOUBLE_EQ(empirical_quantile(single, 0.31), 7.0);
    EXPECT_DOUBLE_EQ(empirical_quantile(single, 0.999), 7.0);

    const std::vector<double> three{3.0, 1.0, 2.0};
    EXPECT_DOUBLE_EQ(empirical_quantile(three, 0.5), 2.0);
}

TEST(EmpiricalQuantile, ProductRoundingDoesNotShiftTheOrderStatistic) {
    // 0.29 * 100 evaluates to 28.999999999999996 in floating point; the
    // intended order statistic is still the 29th
    std::vector<double> v(100);
    for (int i = 0; i < 100; ++i) v[static_cast<std::size_t>(i)] = i + 1;
    EXPECT_DOUBLE_EQ(empirical_quantile(v, 0.29), 29.0);
    EXPECT_DOUBLE_EQ(empirical_quantile(v, 0.07), 7.0);
    EXPECT_DOUBLE_EQ(empirical_quantile(v, 0.01), 1.0);
    EXPECT_DOUBLE_EQ(empirical_quantile(v, 0.99), 99.0);
}

TEST(EmpiricalQuantile, RejectsEmptyAndBadLevels) {
    EXPECT_THROW(empirical_quantile({}, 0.5), stx::Error);
    const std::vector<double> v{1.0};
    EXPECT_THROW(empirical_quantile(v, 0.0), stx::Error);
    EXPECT_THROW(empirical_quantile(v, 1.0), stx::Error);
}

TEST(EmpiricalQuantile, HomogeneousAndMonotoneEquivariant) {
    stx::Rng rng(29);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> v(1 + static_cast<std::size_t>(rng.uniform() * 40));
        for (auto& x : v) x = 4.0 * rng.uniform() - 2.0;
        const double q = 0.05 + 0.9 * rng.uniform();
        const double base = empirical_quantile(v, q);
        for (double c : {0.5, 2.0, 10.0}) {
            std::vector<double> scaled(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) scaled[i] = c * v[i];
            EXPECT_DOUBLE_EQ(empirical_quantile(scaled, q), c * base);
        }
        std::vector<double> cubed(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) cubed[i] = v[i] * v[i] * v[i];
        EXPECT_DOUBLE_EQ(empirical_quantile(cubed, q), base * base * base);
    }
}

TEST(SpatialGrid, ValidatesSites) {
    EXPECT_THROW(stx::SpatialGrid({}, stx::CoordSystem::planar_km), stx::Error);
    EXPECT_THROW(stx::SpatialGrid({{0, 0}, {0, 0}}, stx::CoordSystem::planar_km), stx::Error);
    const double inf = std::numeric_limits<double>::infinity();
    EXPECT_THROW(stx::SpatialGrid({{inf, 0}}, stx::CoordSystem::planar_km), stx::Error);
    const stx::SpatialGrid g({{0, 0}, {1, 0}}, stx::CoordSystem::planar_km);
    EXPECT_EQ(g.site_count(), 2u);
    EXPECT_DOUBLE_EQ(g.distance_km(0, 1), 1.0);
}

TEST(SpatialGrid, HaversineDistance) {
    // one degree of latitude is about 111.2 km
    const stx::SpatialGrid g({{30.0, 10.0}, {30.0, 11.0}}, stx::CoordSystem::lonlat);
    EXPECT_NEAR(g.distance_km(0, 1), 111.2, 0.5);
}

TEST(FieldSeries, ValidatesShapeAndFiniteness) {
    auto grid = std::make_shared<stx::SpatialGrid>(stx::SpatialGrid::regular(2, 2, 1.0));
    EXPECT_THROW(stx::FieldSeries(grid, 2, std::vector<double>(7, 0.0)), stx::Error);
    std::vector<double> with_nan(8, 1.0);
    with_nan[3] = std::nan("");
    EXPECT_THROW(stx::FieldSeries(grid, 2, with_nan), stx::Error);
    const stx::FieldSeries ok(grid, 2, std::vector<double>(8, 1.5));
    EXPECT_EQ(ok.n_times(), 2u);
    EXPECT_DOUBLE_EQ(ok.at(1, 3), 1.5);
}

TEST(ThresholdSpec, ResolvesAgainstRiskSeries) {
    std::vector<double> rv(100);
    for (int i = 0; i < 100; ++i) rv[static_cast<std::size_t>(i)] = i + 1;
    EXPECT_DOUBLE_EQ(stx::ThresholdSpec::quantile(0.95).resolve(rv), 95.0);
    EXPECT_DOUBLE_EQ(stx::ThresholdSpec::absolute(42.0).resolve(rv), 42.0);
    EXPECT_THROW(stx::ThresholdSpec::quantile(1.0), stx::Error);
}
