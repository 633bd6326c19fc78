#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "stx/bootstrap.hpp"
#include "stx/clusters.hpp"
#include "stx/field_series.hpp"
#include "stx/parallel.hpp"
#include "stx/risk.hpp"
#include "stx/tail_oracle.hpp"
#include "stx/threshold.hpp"
#include "stx/types.hpp"

namespace stx {

struct AnalysisConfig {
    RiskFunctional risk = RiskFunctional::mean();
    ThresholdSpec threshold = ThresholdSpec::quantile(0.95);
    std::size_t l_max = 12;
    std::vector<std::size_t> pattern_lengths = {2, 3};
    bool with_area = true;
    bool with_location = true;
    LocationMeasure location{LocationMeasure::Kind::exceedance_centroid};
    SpatialRiskMeasure exposure{};
    bool exact_size_patterns = false;
    std::optional<BootstrapConfig> bootstrap = BootstrapConfig{};

    void validate() const {
        require(l_max >= 1, errc::invalid_argument, "l_max must be >= 1");
        for (auto l : pattern_lengths) {
            require(l >= 2 && l <= 5, errc::invalid_argument, "pattern lengths must be in [2,5]");
        }
    }
};

struct FamilyEstimate {
    std::string family;
    PatternDistribution dist;
    std::int64_t n_degenerate_replicates = 0;
};

struct AnalysisResult {
    double threshold_u = 0.0;
    std::int64_t n_clusters = 0;
    std::vector<FamilyEstimate> families;
    std::int64_t n_ties = 0;
    std::int64_t n_skipped_undefined = 0;
    std::int64_t n_degenerate_replicates = 0;
    std::int64_t runtime_ms = 0;
};

/// Full estimation pipeline on one anomaly series: risk series, threshold,
/// cluster extraction, all requested ratio estimators, and the multiplier
/// block bootstrap. One threshold u, resolved on the risk series, governs
/// both the cluster definition and the pointwise area/location statistics.
inline AnalysisResult run_analysis(const FieldSeries& series, const AnalysisConfig& cfg) {
    cfg.validate();
    const auto t_start = std::chrono::steady_clock::now();

    AnalysisResult res;
    const std::vector<double> rv = risk_series(series, cfg.risk);
    res.threshold_u = cfg.threshold.resolve(rv);
    const auto clusters = extract_clusters(rv, res.threshold_u);
    require(!clusters.empty(), errc::no_clusters, "no clusters at this threshold");
    res.n_clusters = static_cast<std::int64_t>(clusters.size());

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> area_series, lon_series, lat_series;
    if (cfg.with_area) {
        cfg.exposure.validate(series.site_count());
        area_series.resize(series.n_times());
        for (std::size_t t = 0; t < series.n_times(); ++t) {
            area_series[t] = spatial_risk(cfg.exposure, series.field_at(t), res.threshold_u);
        }
    }
    if (cfg.with_location) {
        lon_series.resize(series.n_times());
        lat_series.resize(series.n_times());
        for (std::size_t t = 0; t < series.n_times(); ++t) {
            const auto loc = locate(cfg.location, series.grid(), series.field_at(t), res.threshold_u);
            lon_series[t] = loc ? loc->x : nan;
            lat_series[t] = loc ? loc->y : nan;
        }
    }

    struct FamilySpec {
        std::string name;
        LabeledWindowSet windows;
    };
    std::vector<FamilySpec> specs;
    specs.push_back({"cluster_size", cluster_size_windows(clusters, cfg.l_max)});
    for (std::size_t l : cfg.pattern_lengths) {
        const std::string suffix = "_l" + std::to_string(l);
        specs.push_back({"pattern_intensity" + suffix,
                         pattern_windows(clusters, rv, l, cfg.exact_size_patterns)});
        if (cfg.with_area) {
            specs.push_back({"pattern_area" + suffix,
                             pattern_windows(clusters, area_series, l, cfg.exact_size_patterns)});
        }
        if (cfg.with_location) {
            specs.push_back({"pattern_longitude" + suffix,
                             pattern_windows(clusters, lon_series, l, cfg.exact_size_patterns)});
            specs.push_back({"pattern_latitude" + suffix,
                             pattern_windows(clusters, lat_series, l, cfg.exact_size_patterns)});
        }
    }

    std::optional<std::vector<std::vector<double>>> multipliers;
    std::size_t n_blocks = 0;
    if (cfg.bootstrap) {
        std::size_t largest = 1;
        for (auto l : cfg.pattern_lengths) largest = std::max(largest, l);
        cfg.bootstrap->validate(largest);
        require(series.n_times() >= 2 * cfg.bootstrap->block_length, errc::invalid_argument,
                "series must cover at least two bootstrap blocks");
        n_blocks = series.n_times() / cfg.bootstrap->block_length;
        multipliers = draw_multipliers(*cfg.bootstrap, n_blocks);
    }

    for (auto& spec : specs) {
        FamilyEstimate fam;
        fam.family = spec.name;
        fam.dist = detail::tally_windows(spec.windows, errc::no_clusters,
                                         "no qualifying clusters for " + spec.name);
        if (spec.name != "cluster_size") {
            fam.dist.n_ties = fam.dist.counts.back();
        }
        if (cfg.bootstrap) {
            const auto bc = block_counts(spec.windows, series.n_times(),
                                         cfg.bootstrap->block_length);
            const auto ci = bootstrap_ci(bc, *cfg.bootstrap, *multipliers);
            fam.dist.ci_lo.resize(ci.intervals.size());
            fam.dist.ci_hi.resize(ci.intervals.size());
            for (std::size_t i = 0; i < ci.intervals.size(); ++i) {
                fam.dist.ci_lo[i] = ci.intervals[i].lo;
                fam.dist.ci_hi[i] = ci.intervals[i].hi;
            }
            fam.n_degenerate_replicates = ci.n_degenerate;
        }
        res.n_ties += fam.dist.n_ties;
        res.n_skipped_undefined += fam.dist.n_skipped_undefined;
        res.n_degenerate_replicates += fam.n_degenerate_replicates;
        res.families.push_back(std::move(fam));
    }

    res.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - t_start)
                         .count();
    return res;
}

struct OracleRequest {
    RiskFunctional risk = RiskFunctional::mean();
    std::size_t l_max = 3;
    std::vector<std::size_t> pattern_lengths = {2};
    bool with_area = false;
    bool with_location = false;
    bool exact_size = false;
};

struct OracleRow {
    std::string family;
    std::string label;
    OracleEstimate estimate;
};

struct OracleRunResult {
    std::vector<OracleRow> rows;
    std::int64_t n_undefined = 0;
    std::int64_t runtime_ms = 0;
};

/// Evaluates every requested limit quantity with Monte Carlo draws from the
/// anchored spectral process. Draw i always uses the stream derived from
/// (seed, i), so estimates share common draws and parallel runs match the
/// serial ones bit for bit.
inline OracleRunResult run_oracle(const OracleConfig& cfg, const OracleRequest& req,
                                  std::size_t threads = 1) {
    const auto t_start = std::chrono::steady_clock::now();
    std::size_t needed = req.l_max;
    for (auto l : req.pattern_lengths) needed = std::max(needed, l);
    require(static_cast<long>(needed) <= cfg.window_len, errc::invalid_argument,
            "oracle window is shorter than the requested quantities");
    const BrownResnickSpectralSource source(cfg);

    OracleRunResult out;
    for (std::size_t l = 1; l <= req.l_max; ++l) {
        const auto est =
            oracle_cluster_size(source, cfg.draws, static_cast<long>(l), req.risk, threads);
        out.rows.push_back({"cluster_size", std::to_string(l), est});
    }
    for (std::size_t l : req.pattern_lengths) {
        const std::string suffix = "_l" + std::to_string(l);
        const auto intensity = oracle_pattern_intensity(source, cfg.draws, static_cast<long>(l),
                                                        req.risk, req.exact_size, threads);
        for (std::size_t i = 0; i < intensity.labels.size(); ++i) {
            out.rows.push_back({"pattern_intensity" + suffix, intensity.labels[i],
                                intensity.estimates[i]});
        }
        const auto add_functional = [&](OracleStat stat, const std::string& family) {
            const auto d = oracle_pattern_functional(source, cfg.draws, static_cast<long>(l),
                                                     req.risk, stat, *cfg.grid,
                                                     cfg.quadrature_points, req.exact_size,
                                                     threads);
            for (std::size_t i = 0; i < d.labels.size(); ++i) {
                out.rows.push_back({family + suffix, d.labels[i], d.estimates[i]});
            }
            out.n_undefined += d.n_undefined;
        };
        if (req.with_area) add_functional(OracleStat::area, "pattern_area");
        if (req.with_location) {
            add_functional(OracleStat::longitude, "pattern_longitude");
            add_functional(OracleStat::latitude, "pattern_latitude");
        }
    }
    out.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - t_start)
                         .count();
    return out;
}

}  // namespace stx
