#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "stx/grid.hpp"
#include "stx/risk.hpp"
#include "stx/rng.hpp"

using stx::apply_risk;
using stx::RiskFunctional;

namespace {

std::vector<double> random_field(stx::Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = 4.0 * rng.uniform() - 1.0;
    return v;
}

}  // namespace

TEST(ApplyRisk, Examples) {
    EXPECT_DOUBLE_EQ(apply_risk(RiskFunctional::max(), std::vector<double>{1, 4, 2}), 4.0);
    EXPECT_DOUBLE_EQ(apply_risk(RiskFunctional::mean(), std::vector<double>{1, 4, 2, 5}), 3.0);
    // lower median: second order statistic of four
    EXPECT_DOUBLE_EQ(apply_risk(RiskFunctional::median(), std::vector<double>{1, 2, 3, 4}), 2.0);
    EXPECT_DOUBLE_EQ(apply_risk(RiskFunctional::min(), std::vector<double>{3, -1, 2}), -1.0);
    EXPECT_DOUBLE_EQ(apply_risk(RiskFunctional::quantile(0.75), std::vector<double>{1, 2, 3, 4}),
                     3.0);
}

TEST(ApplyRisk, PositiveHomogeneity) {
    stx::Rng rng(3);
    const std::vector<RiskFunctional> kinds{RiskFunctional::max(), RiskFunctional::min(),
                                            RiskFunctional::mean(), RiskFunctional::median(),
                                            RiskFunctional::quantile(0.3)};
    for (int rep = 0; rep < 100; ++rep) {
        const auto f = random_field(rng, 1 + static_cast<std::size_t>(rng.uniform() * 30));
        for (const auto& r : kinds) {
            const double base = apply_risk(r, f);
            for (double c : {0.5, 2.0, 10.0}) {
                std::vector<double> scaled(f.size());
                for (std::size_t i = 0; i < f.size(); ++i) scaled[i] = c * f[i];
                const double got = apply_risk(r, scaled);
                EXPECT_NEAR(got, c * base, 1e-12 * std::max(1.0, std::abs(c * base)));
            }
        }
    }
}

TEST(ApplyRisk, OrderBasedKindsCommuteWithMonotoneTransforms) {
    stx::Rng rng(5);
    const std::vector<RiskFunctional> order_based{RiskFunctional::max(), RiskFunctional::min(),
                                                  RiskFunctional::median(),
                                                  RiskFunctional::quantile(0.8)};
    const auto cube = [](double x) { return x * x * x; };
    for (int rep = 0; rep < 100; ++rep) {
        const auto f = random_field(rng, 1 + static_cast<std::size_t>(rng.uniform() * 30));
        std::vector<double> cubed(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) cubed[i] = cube(f[i]);
        for (const auto& r : order_based) {
            EXPECT_TRUE(r.order_based());
            // exact: both paths cube the same selected element
            EXPECT_DOUBLE_EQ(apply_risk(r, cubed), cube(apply_risk(r, f)));
        }
    }
}

TEST(ApplyRisk, MeanDoesNotCommute) {
    const std::vector<double> f{0.0, 2.0};
    const auto cube = [](double x) { return x * x * x; };
    std::vector<double> cubed{0.0, 8.0};
    EXPECT_FALSE(RiskFunctional::mean().order_based());
    EXPECT_NE(apply_risk(RiskFunctional::mean(), cubed),
              cube(apply_risk(RiskFunctional::mean(), f)));
}

TEST(SpatialRisk, ExceedanceFractionExamples) {
    stx::SpatialRiskMeasure unit;
    std::vector<double> f(10, 0.0);
    f[1] = f[4] = f[7] = 2.0;
    EXPECT_DOUBLE_EQ(stx::spatial_risk(unit, f, 1.0), 0.3);
    std::fill(f.begin(), f.end(), 5.0);
    EXPECT_DOUBLE_EQ(stx::spatial_risk(unit, f, 1.0), 1.0);

    stx::SpatialRiskMeasure weighted;
    weighted.exposure.assign(10, 0.0);
    weighted.exposure[0] = 2.0;
    std::fill(f.begin(), f.end(), 0.0);
    f[0] = 3.0;
    EXPECT_DOUBLE_EQ(stx::spatial_risk(weighted, f, 1.0), 0.2);
}

TEST(SpatialRisk, MonotoneNonincreasingInThreshold) {
    stx::Rng rng(11);
    stx::SpatialRiskMeasure unit;
    const auto f = random_field(rng, 25);
    double prev = 2.0;
    for (double u = -2.0; u <= 4.0; u += 0.1) {
        const double cur = stx::spatial_risk(unit, f, u);
        EXPECT_LE(cur, prev + 1e-15);
        prev = cur;
    }
}

TEST(SpatialRisk, ExposureValidation) {
    stx::SpatialRiskMeasure m;
    m.exposure.assign(3, 0.0);
    EXPECT_THROW(m.validate(3), stx::Error);     // no positive weight
    m.exposure = {1.0, -0.5, 0.0};
    EXPECT_THROW(m.validate(3), stx::Error);     // negative weight
    m.exposure = {1.0, 0.5};
    EXPECT_THROW(m.validate(3), stx::Error);     // length mismatch
}

TEST(Locate, CentroidAndMedianExamples) {
    const stx::SpatialGrid square({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, stx::CoordSystem::planar_km);
    const std::vector<double> all{2, 2, 2, 2};
    const stx::LocationMeasure centroid{stx::LocationMeasure::Kind::exceedance_centroid};
    const auto c = stx::locate(centroid, square, all, 1.0);
    ASSERT_TRUE(c.has_value());
    EXPECT_DOUBLE_EQ(c->x, 0.5);
    EXPECT_DOUBLE_EQ(c->y, 0.5);

    const stx::SpatialGrid tri({{0, 0}, {2, 0}, {0, 2}}, stx::CoordSystem::planar_km);
    const std::vector<double> exceed{2, 2, 2};
    const stx::LocationMeasure med{stx::LocationMeasure::Kind::componentwise_median};
    const auto mloc = stx::locate(med, tri, exceed, 1.0);
    ASSERT_TRUE(mloc.has_value());
    EXPECT_DOUBLE_EQ(mloc->x, 0.0);
    EXPECT_DOUBLE_EQ(mloc->y, 0.0);
}

TEST(Locate, UndefinedWhenNothingExceeds) {
    const stx::SpatialGrid g({{0, 0}, {1, 0}}, stx::CoordSystem::planar_km);
    const std::vector<double> f{0.5, 0.9};
    for (auto kind : {stx::LocationMeasure::Kind::peak,
                      stx::LocationMeasure::Kind::exceedance_centroid,
                      stx::LocationMeasure::Kind::weighted_centroid,
                      stx::LocationMeasure::Kind::componentwise_median}) {
        EXPECT_FALSE(stx::locate({kind}, g, f, 1.0).has_value());
    }
}

TEST(Locate, PeakBreaksTiesByLowestIndex) {
    const stx::SpatialGrid g({{0, 0}, {1, 0}, {2, 0}}, stx::CoordSystem::planar_km);
    const std::vector<double> f{3.0, 3.0, 1.0};
    const auto loc = stx::locate({stx::LocationMeasure::Kind::peak}, g, f, 0.5);
    ASSERT_TRUE(loc.has_value());
    EXPECT_DOUBLE_EQ(loc->x, 0.0);
}

TEST(Locate, WeightedCentroidClipsNegativesAndCanBeUndefined) {
    const stx::SpatialGrid g({{0, 0}, {1, 0}}, stx::CoordSystem::planar_km);
    const stx::LocationMeasure wc{stx::LocationMeasure::Kind::weighted_centroid};
    // negative weights are clipped, only site 1 carries mass
    const std::vector<double> f{-5.0, 2.0};
    const auto loc = stx::locate(wc, g, f, 0.5);
    ASSERT_TRUE(loc.has_value());
    EXPECT_DOUBLE_EQ(loc->x, 1.0);
    // exceedances exist but every value is nonpositive cannot happen; the
    // all-nonpositive case is reached with a negative threshold
    const std::vector<double> neg{-1.0, -2.0};
    EXPECT_FALSE(stx::locate(wc, g, neg, -3.0).has_value());
}

TEST(Locate, OrderBasedKindsInvariantUnderMonotoneTransforms) {
    stx::Rng rng(17);
    std::vector<stx::Coord> coords;
    for (int i = 0; i < 12; ++i) coords.push_back({rng.uniform(), rng.uniform()});
    const stx::SpatialGrid g(coords, stx::CoordSystem::planar_km);
    const auto cube = [](double x) { return x * x * x; };
    for (int rep = 0; rep < 100; ++rep) {
        auto f = random_field(rng, 12);
        const double u = 2.0 * rng.uniform() - 0.5;
        std::vector<double> fc(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) fc[i] = cube(f[i]);
        for (auto kind : {stx::LocationMeasure::Kind::peak,
                          stx::LocationMeasure::Kind::exceedance_centroid,
                          stx::LocationMeasure::Kind::componentwise_median}) {
            const auto a = stx::locate({kind}, g, f, u);
            const auto b = stx::locate({kind}, g, fc, cube(u));
            ASSERT_EQ(a.has_value(), b.has_value());
            if (a) {
                EXPECT_DOUBLE_EQ(a->x, b->x);
                EXPECT_DOUBLE_EQ(a->y, b->y);
            }
        }
    }
}

TEST(Locate, WeightedCentroidNotTransformInvariant) {
    const stx::SpatialGrid g({{0, 0}, {1, 0}}, stx::CoordSystem::planar_km);
    const stx::LocationMeasure wc{stx::LocationMeasure::Kind::weighted_centroid};
    const std::vector<double> f{1.0, 2.0};
    const std::vector<double> fc{1.0, 8.0};  // cubed
    const auto a = stx::locate(wc, g, f, 0.5);
    const auto b = stx::locate(wc, g, fc, 0.125);
    ASSERT_TRUE(a && b);
    EXPECT_NE(a->x, b->x);
}
