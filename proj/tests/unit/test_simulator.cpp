#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "../support/stats.hpp"
#include "stx/brown_resnick.hpp"
#include "stx/quantile.hpp"
#include "stx/variogram.hpp"

namespace {

stx::GridPtr make_grid(std::size_t rows, std::size_t cols, double spacing) {
    return std::make_shared<stx::SpatialGrid>(stx::SpatialGrid::regular(rows, cols, spacing));
}

}  // namespace

TEST(Simulator, DeterministicPerSeed) {
    stx::SimConfig cfg{make_grid(2, 2, 0.1), 200, 2, 6, 31};
    const auto a = stx::simulate_brown_resnick({}, cfg);
    const auto b = stx::simulate_brown_resnick({}, cfg);
    EXPECT_EQ(a.values(), b.values());
    cfg.seed = 32;
    const auto c = stx::simulate_brown_resnick({}, cfg);
    EXPECT_NE(a.values(), c.values());
}

TEST(Simulator, AllValuesPositive) {
    stx::SimConfig cfg{make_grid(3, 3, 0.1), 500, 2, 5, 7};
    const auto s = stx::simulate_brown_resnick({}, cfg);
    for (double v : s.values()) EXPECT_GT(v, 0.0);
}

TEST(Simulator, SinglePointReducesToAUnitFrechetDraw) {
    // 1x1 grid, one time step, no approximation: the algorithm collapses to
    // the largest Poisson point, a single unit Frechet variable.
    const std::size_t n_seeds = 20000;
    std::vector<double> uniforms;
    for (std::uint64_t seed = 1; seed <= n_seeds; ++seed) {
        stx::SimConfig cfg{make_grid(1, 1, 1.0), 1, 1, 1, seed};
        const auto s = stx::simulate_brown_resnick({}, cfg);
        uniforms.push_back(testsupport::frechet_cdf(s.at(0, 0)));
    }
    double mean = 0.0;
    for (double u : uniforms) mean += u;
    mean /= static_cast<double>(uniforms.size());
    EXPECT_NEAR(mean, 0.5, 0.01);
    std::sort(uniforms.begin(), uniforms.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < uniforms.size(); ++i) {
        ks = std::max(ks, std::abs(uniforms[i] - (i + 0.5) / static_cast<double>(n_seeds)));
    }
    EXPECT_LT(ks, 1.95 / std::sqrt(static_cast<double>(n_seeds)));  // 1e-3 level
}

TEST(Simulator, UnitFrechetMarginsOnAndOffTheSubgrid) {
    // stride 2 on a 2x2 grid: sites 0 and 2 are exact, 1 and 3 approximate
    stx::SimConfig cfg{make_grid(2, 2, 0.05), 12000, 2, 18, 2718};
    const auto s = stx::simulate_brown_resnick({}, cfg);
    for (std::size_t site = 0; site < 4; ++site) {
        std::vector<double> col(s.n_times());
        for (std::size_t t = 0; t < s.n_times(); ++t) col[t] = s.at(t, site);
        EXPECT_LT(testsupport::ks_to_unit_frechet(col), 0.02) << "site " << site;
    }
}

TEST(Simulator, StrideTwoMatchesStrideOneDependence) {
    // summary statistics of the approximate sampler agree with the exact one
    const stx::VariogramSpec vario{};
    stx::SimConfig exact{make_grid(2, 2, 0.1), 6000, 1, 12, 99};
    stx::SimConfig approx{make_grid(2, 2, 0.1), 6000, 2, 12, 100};
    const auto se = stx::simulate_brown_resnick(vario, exact);
    const auto sa = stx::simulate_brown_resnick(vario, approx);
    const double g01 = stx::variogram(vario, se.grid().site(0).x - se.grid().site(1).x,
                                      se.grid().site(0).y - se.grid().site(1).y, 0.0);
    const double want = testsupport::closed_form_extremal_coefficient(g01);
    const double theta_exact = testsupport::madogram_extremal_coefficient(se, 0, 1);
    const double theta_approx = testsupport::madogram_extremal_coefficient(sa, 0, 1);
    EXPECT_NEAR(theta_exact, want, 0.06);
    EXPECT_NEAR(theta_approx, want, 0.06);
    EXPECT_NEAR(theta_exact, theta_approx, 0.09);
}

TEST(Simulator, PairwiseExtremalCoefficientMatchesClosedForm) {
    const stx::VariogramSpec vario{};
    stx::SimConfig cfg{make_grid(1, 2, 0.3), 12000, 1, 12, 555};
    const auto s = stx::simulate_brown_resnick(vario, cfg);
    const double g = stx::variogram(vario, 0.3, 0.0, 0.0);
    EXPECT_NEAR(testsupport::madogram_extremal_coefficient(s, 0, 1),
                testsupport::closed_form_extremal_coefficient(g), 0.05);
}

TEST(Simulator, ValidatesConfig) {
    stx::SimConfig cfg;
    EXPECT_THROW(stx::simulate_brown_resnick({}, cfg), stx::Error);  // missing grid
    cfg.grid = make_grid(1, 1, 1.0);
    cfg.n_times = 0;
    EXPECT_THROW(stx::simulate_brown_resnick({}, cfg), stx::Error);
    cfg.n_times = 1;
    cfg.subgrid_stride = 0;
    EXPECT_THROW(stx::simulate_brown_resnick({}, cfg), stx::Error);
}
