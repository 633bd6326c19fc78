#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "stx/field_series.hpp"
#include "stx/gaussian_field.hpp"
#include "stx/grid.hpp"
#include "stx/rng.hpp"
#include "stx/types.hpp"
#include "stx/variogram.hpp"

namespace stx {

/// Configuration of the max-stable sampler. Stride 1 with a truncation
/// covering the whole series is the exact extremal-functions sampler; the
/// defaults make the sampler exact on every second site and cut the
/// influence of an extremal function beyond 18 time lags.
struct SimConfig {
    GridPtr grid;
    std::size_t n_times = 0;
    std::size_t subgrid_stride = 2;
    std::size_t temporal_truncation = 18;
    std::uint64_t seed = 1;

    void validate() const {
        require(grid != nullptr, errc::invalid_argument, "simulation needs a grid");
        require(n_times >= 1, errc::invalid_argument, "simulation needs n_times >= 1");
        require(subgrid_stride >= 1, errc::invalid_argument, "subgrid stride must be >= 1");
        require(temporal_truncation >= 1, errc::invalid_argument,
                "temporal truncation must be >= 1");
    }
};

namespace detail {

/// Window geometry shared by all anchor sites: subgrid points at relative
/// times 0, -1, ..., -T first (the rows needed for the accept check), then
/// future subgrid points, then all off-subgrid points.
struct SimWindow {
    std::vector<int> win_site;
    std::vector<int> win_rel;
    std::size_t check_rows = 0;  // window points in the past/present subgrid block
    std::size_t n_points = 0;
};

inline SimWindow build_sim_window(std::size_t site_count, const std::vector<int>& subgrid,
                                  long t_trunc) {
    SimWindow w;
    std::vector<char> on_subgrid(site_count, 0);
    for (int s : subgrid) on_subgrid[static_cast<std::size_t>(s)] = 1;
    for (long rel = 0; rel >= -t_trunc; --rel) {
        for (int s : subgrid) {
            w.win_site.push_back(s);
            w.win_rel.push_back(static_cast<int>(rel));
        }
    }
    w.check_rows = w.win_site.size();
    for (long rel = 1; rel <= t_trunc; ++rel) {
        for (int s : subgrid) {
            w.win_site.push_back(s);
            w.win_rel.push_back(static_cast<int>(rel));
        }
    }
    for (long rel = -t_trunc; rel <= t_trunc; ++rel) {
        for (std::size_t s = 0; s < site_count; ++s) {
            if (!on_subgrid[s]) {
                w.win_site.push_back(static_cast<int>(s));
                w.win_rel.push_back(static_cast<int>(rel));
            }
        }
    }
    w.n_points = w.win_site.size();
    return w;
}

struct AnchorFactor {
    CholeskyPacked<float> chol;
    std::vector<double> gamma_row;  // variogram to the anchor, per factor row
    std::vector<int> row_site;
    std::vector<int> row_rel;
    std::vector<char> row_processed_at_rel0;  // subgrid position precedes the anchor
};

}  // namespace detail

/// Stationary space-time Brown-Resnick field with unit Frechet margins via
/// the extremal-functions construction. Subgrid points are processed
/// time-major then by site index; each candidate Poisson function is kept
/// only if it stays strictly below the running maximum at every previously
/// processed subgrid point of its window.
inline FieldSeries simulate_brown_resnick(const VariogramSpec& vario, const SimConfig& cfg) {
    vario.validate();
    cfg.validate();
    const SpatialGrid& grid = *cfg.grid;
    const std::size_t S = grid.site_count();
    const std::size_t n = cfg.n_times;
    const long t_trunc = static_cast<long>(
        std::min(cfg.temporal_truncation, n >= 2 ? n - 1 : std::size_t{1}));

    std::vector<int> subgrid;
    for (std::size_t s = 0; s < S; s += cfg.subgrid_stride) subgrid.push_back(static_cast<int>(s));
    const std::size_t m = subgrid.size();

    const detail::SimWindow win = detail::build_sim_window(S, subgrid, t_trunc);

    // Pairwise variogram over the window, shared by every anchor site.
    const std::size_t nw = win.n_points;
    std::vector<SpaceTimeCoord> pts(nw);
    for (std::size_t i = 0; i < nw; ++i) {
        const Coord& c = grid.site(static_cast<std::size_t>(win.win_site[i]));
        pts[i] = {c.x, c.y, static_cast<double>(win.win_rel[i])};
    }
    Eigen::MatrixXd pair_gamma(nw, nw);
    for (std::size_t i = 0; i < nw; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const double v = variogram(vario, pts[i], pts[j]);
            pair_gamma(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            pair_gamma(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
        }
    }

    // One factorization per anchor site; the anchor point itself is pinned
    // to W = 0 and excluded from the factor.
    std::vector<detail::AnchorFactor> anchors(m);
    for (std::size_t p0 = 0; p0 < m; ++p0) {
        const std::size_t anchor_wi = p0;  // subgrid position p0 at relative time 0
        std::vector<double> g(nw);
        for (std::size_t i = 0; i < nw; ++i) {
            g[i] = pair_gamma(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(anchor_wi));
        }
        const std::size_t dim = nw - 1;
        Eigen::MatrixXd cov(dim, dim);
        detail::AnchorFactor& af = anchors[p0];
        af.gamma_row.resize(dim);
        af.row_site.resize(dim);
        af.row_rel.resize(dim);
        af.row_processed_at_rel0.assign(dim, 0);
        std::vector<std::size_t> rows(dim);
        {
            std::size_t r = 0;
            for (std::size_t wi = 0; wi < nw; ++wi) {
                if (wi == anchor_wi) continue;
                rows[r] = wi;
                af.gamma_row[r] = g[wi];
                af.row_site[r] = win.win_site[wi];
                af.row_rel[r] = win.win_rel[wi];
                af.row_processed_at_rel0[r] = (win.win_rel[wi] == 0 && wi < anchor_wi) ? 1 : 0;
                ++r;
            }
        }
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                const double v = g[rows[i]] + g[rows[j]] -
                                 pair_gamma(static_cast<Eigen::Index>(rows[i]),
                                            static_cast<Eigen::Index>(rows[j]));
                cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
                cov(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
            }
        }
        af.chol = CholeskyPacked<float>(cov);
    }

    const double neg_inf = -std::numeric_limits<double>::infinity();
    std::vector<double> log_z(n * S, neg_inf);
    Rng rng(cfg.seed);

    const std::size_t dim = nw - 1;
    std::vector<float> z(dim);
    std::vector<double> w_buf(dim);
    const std::size_t check_rows = win.check_rows - 1;  // anchor excluded

    for (std::size_t t0 = 0; t0 < n; ++t0) {
        for (std::size_t p0 = 0; p0 < m; ++p0) {
            const detail::AnchorFactor& af = anchors[p0];
            const std::size_t s0 = static_cast<std::size_t>(subgrid[p0]);
            double& anchor_log_z = log_z[t0 * S + s0];
            double inv_zeta = 0.0;
            while (true) {
                inv_zeta += rng.exponential();
                const double log_zeta = -std::log(inv_zeta);
                if (log_zeta <= anchor_log_z) break;

                std::size_t z_filled = 0;
                bool rejected = false;
                for (std::size_t r = 0; r < check_rows; ++r) {
                    const long ta = static_cast<long>(t0) + af.row_rel[r];
                    if (ta < 0 || ta >= static_cast<long>(n)) continue;
                    while (z_filled <= r) z[z_filled++] = static_cast<float>(rng.normal());
                    const double w = af.chol.row_dot(r, z.data());
                    w_buf[r] = w;
                    const bool processed =
                        af.row_rel[r] < 0 || af.row_processed_at_rel0[r] != 0;
                    if (processed &&
                        log_zeta + w - af.gamma_row[r] >=
                            log_z[static_cast<std::size_t>(ta) * S +
                                  static_cast<std::size_t>(af.row_site[r])]) {
                        rejected = true;
                        break;
                    }
                }
                if (rejected) continue;

                // Accept: fold zeta * phi into the running maximum over the
                // whole in-range window.
                anchor_log_z = std::max(anchor_log_z, log_zeta);
                for (std::size_t r = 0; r < check_rows; ++r) {
                    const long ta = static_cast<long>(t0) + af.row_rel[r];
                    if (ta < 0 || ta >= static_cast<long>(n)) continue;
                    double& cell = log_z[static_cast<std::size_t>(ta) * S +
                                         static_cast<std::size_t>(af.row_site[r])];
                    cell = std::max(cell, log_zeta + w_buf[r] - af.gamma_row[r]);
                }
                for (std::size_t r = check_rows; r < dim; ++r) {
                    const long ta = static_cast<long>(t0) + af.row_rel[r];
                    if (ta < 0 || ta >= static_cast<long>(n)) {
                        // still advance the stream so later rows see their z
                        continue;
                    }
                    while (z_filled <= r) z[z_filled++] = static_cast<float>(rng.normal());
                    const double w = af.chol.row_dot(r, z.data());
                    double& cell = log_z[static_cast<std::size_t>(ta) * S +
                                         static_cast<std::size_t>(af.row_site[r])];
                    cell = std::max(cell, log_zeta + w - af.gamma_row[r]);
                }
            }
        }
    }

    std::vector<double> values(n * S);
    for (std::size_t i = 0; i < values.size(); ++i) {
        require(std::isfinite(log_z[i]), errc::non_finite,
                "internal error: simulation left a point uncovered");
        values[i] = std::exp(log_z[i]);
    }
    return FieldSeries(cfg.grid, n, std::move(values));
}

}  // namespace stx
