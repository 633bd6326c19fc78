#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stx/gaussian_field.hpp"
#include "stx/grid.hpp"
#include "stx/ordinal.hpp"
#include "stx/parallel.hpp"
#include "stx/risk.hpp"
#include "stx/rng.hpp"
#include "stx/types.hpp"
#include "stx/variogram.hpp"

namespace stx {

/// One realization of the anchored spectral process on the space-time window
/// {-1, ..., window_len} x sites, with value exactly 1 at the anchor.
/// All limit quantities are ratios of exponent-measure masses, which for a
/// tail index of 1 reduce to expectations of clipped differences of the
/// per-time risk values of V.
struct SpectralDraw {
    std::size_t n_sites = 0;
    long window_len = 0;  // covers relative times -1 .. window_len
    std::vector<double> values;

    double at(long rel_t, std::size_t site) const {
        return values[static_cast<std::size_t>(rel_t + 1) * n_sites + site];
    }
    std::span<const double> field_at(long rel_t) const {
        return {values.data() + static_cast<std::size_t>(rel_t + 1) * n_sites, n_sites};
    }
};

struct OracleConfig {
    VariogramSpec vario;
    GridPtr grid;
    long window_len = 3;
    long anchor_site = -1;  // negative: site nearest the grid centroid
    std::int64_t draws = 1'000'000;
    std::size_t quadrature_points = 200;
    std::uint64_t seed = 1;

    void validate() const {
        vario.validate();
        require(grid != nullptr, errc::invalid_argument, "oracle needs a grid");
        require(window_len >= 1, errc::invalid_argument, "oracle window must cover l >= 1");
        require(draws >= 10'000, errc::invalid_argument, "oracle needs at least 1e4 draws");
        require(quadrature_points >= 50, errc::invalid_argument,
                "oracle needs at least 50 quadrature points");
        if (anchor_site >= 0) {
            require(static_cast<std::size_t>(anchor_site) < grid->site_count(),
                    errc::invalid_argument, "anchor site out of range");
        }
    }
};

/// Draws V(x) = exp(W(x) - gamma(x - x0)) anchored at (anchor site, time 0).
/// Draw index i always maps to the same stream, so results do not depend on
/// scheduling and common draws are shared between estimates.
class BrownResnickSpectralSource {
public:
    explicit BrownResnickSpectralSource(const OracleConfig& cfg) : cfg_(cfg) {
        cfg.validate();
        anchor_site_ = cfg.anchor_site >= 0 ? static_cast<std::size_t>(cfg.anchor_site)
                                            : cfg.grid->central_site();
        const std::size_t S = cfg.grid->site_count();
        std::vector<SpaceTimeCoord> pts;
        pts.reserve(static_cast<std::size_t>(cfg.window_len + 2) * S);
        for (long rel = -1; rel <= cfg.window_len; ++rel) {
            for (std::size_t s = 0; s < S; ++s) {
                const Coord& c = cfg.grid->site(s);
                pts.push_back({c.x, c.y, static_cast<double>(rel)});
            }
        }
        anchor_index_ = S + anchor_site_;  // relative time 0 row
        chol_ = CholeskyPacked<double>(increment_covariance(cfg.vario, pts, anchor_index_));
        gamma_.resize(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            gamma_[i] = variogram(cfg.vario, pts[i], pts[anchor_index_]);
        }
    }

    std::size_t n_sites() const { return cfg_.grid->site_count(); }
    long window_len() const { return cfg_.window_len; }
    std::size_t anchor_site() const { return anchor_site_; }

    SpectralDraw draw(std::uint64_t index) const {
        Rng rng = Rng::stream(cfg_.seed, index);
        const std::size_t n_pts = gamma_.size();
        std::vector<double> z(chol_.dim());
        for (auto& v : z) v = rng.normal();
        SpectralDraw d;
        d.n_sites = n_sites();
        d.window_len = cfg_.window_len;
        d.values.resize(n_pts);
        std::size_t row = 0;
        for (std::size_t i = 0; i < n_pts; ++i) {
            if (i == anchor_index_) {
                d.values[i] = 1.0;
                continue;
            }
            d.values[i] = std::exp(chol_.row_dot(row, z.data()) - gamma_[i]);
            ++row;
        }
        return d;
    }

private:
    OracleConfig cfg_;
    std::size_t anchor_site_ = 0;
    std::size_t anchor_index_ = 0;
    CholeskyPacked<double> chol_;
    std::vector<double> gamma_;
};

/// Monte Carlo estimate with its standard error; probabilities are clamped
/// to [0,1] with the raw value kept alongside.
struct OracleEstimate {
    double prob = 0.0;
    double raw = 0.0;
    double se = 0.0;
};

namespace detail {

/// Delta-method standard error of (mean num)/(mean den) from per-draw sums.
struct RatioAccumulator {
    double sum_n = 0.0, sum_n2 = 0.0, sum_d = 0.0, sum_d2 = 0.0, sum_nd = 0.0;
    std::int64_t m = 0;

    void add(double num, double den) {
        sum_n += num;
        sum_n2 += num * num;
        sum_d += den;
        sum_d2 += den * den;
        sum_nd += num * den;
        ++m;
    }

    void merge(const RatioAccumulator& o) {
        sum_n += o.sum_n;
        sum_n2 += o.sum_n2;
        sum_d += o.sum_d;
        sum_d2 += o.sum_d2;
        sum_nd += o.sum_nd;
        m += o.m;
    }

    double den_mean() const { return sum_d / static_cast<double>(m); }

    double den_se() const {
        const double md = static_cast<double>(m);
        const double var = std::max(0.0, sum_d2 / md - den_mean() * den_mean());
        return std::sqrt(var / md);
    }

    OracleEstimate estimate() const {
        const double md = static_cast<double>(m);
        const double nbar = sum_n / md;
        const double dbar = sum_d / md;
        const double r = nbar / dbar;
        const double var_n = std::max(0.0, sum_n2 / md - nbar * nbar);
        const double var_d = std::max(0.0, sum_d2 / md - dbar * dbar);
        const double cov = sum_nd / md - nbar * dbar;
        const double var_r = std::max(0.0, var_n - 2.0 * r * cov + r * r * var_d);
        OracleEstimate e;
        e.raw = r;
        e.prob = std::clamp(r, 0.0, 1.0);
        e.se = std::sqrt(var_r / md) / dbar;
        return e;
    }
};

inline void check_denominator(const RatioAccumulator& acc, const char* what) {
    require(acc.den_mean() > 3.0 * acc.den_se(), errc::degenerate_model,
            std::string("temporally degenerate model: ") + what +
                " denominator is not separated from zero");
}

inline std::vector<double> window_risks(const SpectralDraw& d, const RiskFunctional& r) {
    std::vector<double> risks(static_cast<std::size_t>(d.window_len + 2));
    for (long rel = -1; rel <= d.window_len; ++rel) {
        risks[static_cast<std::size_t>(rel + 1)] = apply_risk(r, d.field_at(rel));
    }
    return risks;
}

/// Fixed chunking keeps floating accumulation order identical for every
/// thread count; partial states are merged in chunk order.
constexpr std::int64_t kOracleChunk = 8192;

}  // namespace detail

/// Limit probability that a randomly selected exceedance cluster has size l:
///   E[(min_{0<=t<l} r(V_t) - max(r(V_{-1}), r(V_l)))_+] / E[(r(V_0) - r(V_{-1}))_+].
template <typename Source>
OracleEstimate oracle_cluster_size(const Source& src, std::int64_t draws, long l,
                                   const RiskFunctional& r, std::size_t threads = 1) {
    require(l >= 1 && l <= src.window_len(), errc::invalid_argument,
            "cluster size exceeds the oracle window");
    const auto states = run_chunked<detail::RatioAccumulator>(
        draws, detail::kOracleChunk, threads, [&](std::int64_t lo, std::int64_t hi) {
            detail::RatioAccumulator a;
            for (std::int64_t i = lo; i < hi; ++i) {
                const SpectralDraw d = src.draw(static_cast<std::uint64_t>(i));
                const auto risks = detail::window_risks(d, r);
                double run_min = risks[1];
                for (long t = 1; t < l; ++t) {
                    run_min = std::min(run_min, risks[static_cast<std::size_t>(t + 1)]);
                }
                const double outside = std::max(risks[0], risks[static_cast<std::size_t>(l + 1)]);
                a.add(std::max(0.0, run_min - outside), std::max(0.0, risks[1] - risks[0]));
            }
            return a;
        });
    detail::RatioAccumulator acc;
    for (const auto& s : states) acc.merge(s);
    detail::check_denominator(acc, "cluster size");
    return acc.estimate();
}

struct OracleDistribution {
    std::vector<std::string> labels;
    std::vector<OracleEstimate> estimates;
    std::int64_t n_undefined = 0;
};

/// Limit distribution of the ordinal pattern of the risk values over the
/// first l times of a cluster of size >= l (left delimiter only). With
/// exact_size the right delimiter is enforced as well.
template <typename Source>
OracleDistribution oracle_pattern_intensity(const Source& src, std::int64_t draws, long l,
                                            const RiskFunctional& r, bool exact_size = false,
                                            std::size_t threads = 1) {
    require(l >= 2 && l <= 5, errc::invalid_argument, "pattern length must be in [2,5]");
    require(l <= src.window_len(), errc::invalid_argument, "pattern exceeds the oracle window");
    const auto perms = all_permutations(static_cast<int>(l));
    using State = std::vector<detail::RatioAccumulator>;
    const auto states = run_chunked<State>(
        draws, detail::kOracleChunk, threads, [&](std::int64_t lo, std::int64_t hi) {
            State a(perms.size() + 1);
            for (std::int64_t i = lo; i < hi; ++i) {
                const SpectralDraw d = src.draw(static_cast<std::uint64_t>(i));
                const auto risks = detail::window_risks(d, r);
                double run_min = risks[1];
                for (long t = 1; t < l; ++t) {
                    run_min = std::min(run_min, risks[static_cast<std::size_t>(t + 1)]);
                }
                double left = risks[0];
                if (exact_size) left = std::max(left, risks[static_cast<std::size_t>(l + 1)]);
                const double weight = std::max(0.0, run_min - left);
                std::size_t label = perms.size();
                if (weight > 0.0) {
                    const auto pat = ordinal_pattern(
                        std::span<const double>(risks.data() + 1, static_cast<std::size_t>(l)));
                    if (!pat.tie) {
                        label = static_cast<std::size_t>(
                            std::find(perms.begin(), perms.end(), pat.ranks) - perms.begin());
                    }
                }
                for (std::size_t k = 0; k < a.size(); ++k) {
                    a[k].add(k == label ? weight : 0.0, weight);
                }
            }
            return a;
        });
    std::vector<detail::RatioAccumulator> acc(perms.size() + 1);
    for (const auto& s : states) {
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k].merge(s[k]);
    }
    detail::check_denominator(acc[0], "pattern");
    OracleDistribution out;
    for (const auto& p : perms) out.labels.push_back(pattern_label(OrdinalPattern{p, false}));
    out.labels.push_back("ties");
    for (auto& a : acc) out.estimates.push_back(a.estimate());
    return out;
}

enum class OracleStat { intensity, area, longitude, latitude };

/// Limit pattern distribution of a threshold-dependent spatial statistic
/// (affected-area fraction or a centroid coordinate) over the first l times
/// of a cluster of size >= l. The level integral is evaluated per draw by
/// midpoint quadrature on the interval where the conditioning event holds;
/// the denominator uses the closed form shared with the intensity path.
template <typename Source>
OracleDistribution oracle_pattern_functional(const Source& src, std::int64_t draws, long l,
                                             const RiskFunctional& r, OracleStat stat,
                                             const SpatialGrid& grid,
                                             std::size_t quadrature_points,
                                             bool exact_size = false, std::size_t threads = 1) {
    require(l >= 2 && l <= 5, errc::invalid_argument, "pattern length must be in [2,5]");
    require(l <= src.window_len(), errc::invalid_argument, "pattern exceeds the oracle window");
    require(quadrature_points >= 1, errc::invalid_argument, "need at least one quadrature point");
    const auto perms = all_permutations(static_cast<int>(l));
    const SpatialRiskMeasure unit_area;
    const LocationMeasure centroid{LocationMeasure::Kind::exceedance_centroid};

    struct State {
        std::vector<detail::RatioAccumulator> acc;
        std::int64_t n_undefined = 0;
    };
    const auto states = run_chunked<State>(
        draws, detail::kOracleChunk, threads, [&](std::int64_t lo, std::int64_t hi) {
            State st;
            st.acc.resize(perms.size() + 1);
            std::vector<double> stat_values(static_cast<std::size_t>(l));
            std::vector<double> num(perms.size() + 1);
            for (std::int64_t i = lo; i < hi; ++i) {
                const SpectralDraw d = src.draw(static_cast<std::uint64_t>(i));
                const auto risks = detail::window_risks(d, r);
                double run_min = risks[1];
                for (long t = 1; t < l; ++t) {
                    run_min = std::min(run_min, risks[static_cast<std::size_t>(t + 1)]);
                }
                double left = risks[0];
                if (exact_size) left = std::max(left, risks[static_cast<std::size_t>(l + 1)]);
                const double weight = std::max(0.0, run_min - left);
                std::fill(num.begin(), num.end(), 0.0);
                if (weight > 0.0) {
                    const double step = weight / static_cast<double>(quadrature_points);
                    for (std::size_t q = 0; q < quadrature_points; ++q) {
                        const double eta = left + (static_cast<double>(q) + 0.5) * step;
                        bool defined = true;
                        for (long t = 0; t < l; ++t) {
                            const auto field = d.field_at(t);
                            switch (stat) {
                                case OracleStat::intensity:
                                    stat_values[static_cast<std::size_t>(t)] =
                                        risks[static_cast<std::size_t>(t + 1)];
                                    break;
                                case OracleStat::area:
                                    stat_values[static_cast<std::size_t>(t)] =
                                        spatial_risk(unit_area, field, eta);
                                    break;
                                case OracleStat::longitude:
                                case OracleStat::latitude: {
                                    const auto loc = locate(centroid, grid, field, eta);
                                    if (!loc) {
                                        defined = false;
                                        break;
                                    }
                                    stat_values[static_cast<std::size_t>(t)] =
                                        stat == OracleStat::longitude ? loc->x : loc->y;
                                    break;
                                }
                            }
                            if (!defined) break;
                        }
                        if (!defined) {
                            ++st.n_undefined;
                            continue;
                        }
                        const auto pat = ordinal_pattern(stat_values);
                        std::size_t label = perms.size();
                        if (!pat.tie) {
                            label = static_cast<std::size_t>(
                                std::find(perms.begin(), perms.end(), pat.ranks) - perms.begin());
                        }
                        num[label] += step;
                    }
                }
                for (std::size_t k = 0; k < st.acc.size(); ++k) st.acc[k].add(num[k], weight);
            }
            return st;
        });

    std::vector<detail::RatioAccumulator> acc(perms.size() + 1);
    std::int64_t n_undefined = 0;
    for (const auto& s : states) {
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k].merge(s.acc[k]);
        n_undefined += s.n_undefined;
    }
    detail::check_denominator(acc[0], "pattern");
    OracleDistribution out;
    for (const auto& p : perms) out.labels.push_back(pattern_label(OrdinalPattern{p, false}));
    out.labels.push_back("ties");
    for (auto& a : acc) out.estimates.push_back(a.estimate());
    out.n_undefined = n_undefined;
    return out;
}

}  // namespace stx
