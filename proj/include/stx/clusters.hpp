#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stx/field_series.hpp"
#include "stx/ordinal.hpp"
#include "stx/risk.hpp"
#include "stx/types.hpp"

namespace stx {

/// Maximal run of risk values > u, flanked on both sides by in-range
/// non-exceedances. Runs touching either series end are never emitted.
struct ClusterIndex {
    std::size_t start = 0;
    std::size_t length = 0;

    bool operator==(const ClusterIndex&) const = default;
};

inline std::vector<double> risk_series(const FieldSeries& series, const RiskFunctional& r) {
    std::vector<double> out(series.n_times());
    for (std::size_t t = 0; t < series.n_times(); ++t) {
        out[t] = apply_risk(r, series.field_at(t));
    }
    return out;
}

inline std::vector<ClusterIndex> extract_clusters(std::span<const double> rv, double u) {
    std::vector<ClusterIndex> out;
    const std::size_t n = rv.size();
    std::size_t t = 0;
    while (t < n) {
        if (rv[t] > u) {
            const std::size_t start = t;
            while (t < n && rv[t] > u) ++t;
            const std::size_t len = t - start;
            if (start >= 1 && start + len <= n - 1) {
                out.push_back({start, len});
            }
        } else {
            ++t;
        }
    }
    return out;
}

/// Chunked variant of the scan: chunks are scanned independently and runs
/// crossing chunk boundaries are merged afterwards. Output is identical to
/// the sequential scan for every chunk size.
inline std::vector<ClusterIndex> extract_clusters_chunked(std::span<const double> rv, double u,
                                                          std::size_t chunk) {
    require(chunk >= 1, errc::invalid_argument, "chunk size must be >= 1");
    const std::size_t n = rv.size();
    struct Run {
        std::size_t start, length;
    };
    std::vector<Run> runs;
    for (std::size_t lo = 0; lo < n; lo += chunk) {
        const std::size_t hi = std::min(lo + chunk, n);
        std::size_t t = lo;
        while (t < hi) {
            if (rv[t] > u) {
                const std::size_t start = t;
                while (t < hi && rv[t] > u) ++t;
                if (!runs.empty() && runs.back().start + runs.back().length == start) {
                    runs.back().length += t - start;
                } else {
                    runs.push_back({start, t - start});
                }
            } else {
                ++t;
            }
        }
    }
    std::vector<ClusterIndex> out;
    for (const Run& r : runs) {
        if (r.start >= 1 && r.start + r.length <= n - 1) out.push_back({r.start, r.length});
    }
    return out;
}

/// Generic count-ratio kernel: #A / #A0.
inline double ratio_estimator(std::span<const char> indicator_a,
                              std::span<const char> indicator_a0) {
    require(indicator_a.size() == indicator_a0.size(), errc::invalid_argument,
            "indicator vectors must have equal length");
    std::int64_t num = 0, den = 0;
    for (char b : indicator_a) num += b ? 1 : 0;
    for (char b : indicator_a0) den += b ? 1 : 0;
    require(den > 0, errc::zero_denominator, "ratio estimator denominator is zero");
    return static_cast<double>(num) / static_cast<double>(den);
}

/// One counted occurrence: the time window [lo, hi] that determines the event
/// and the label it contributes to. Every window is also a denominator event.
struct LabeledWindow {
    std::size_t lo = 0;
    std::size_t hi = 0;
    int label = 0;
};

struct LabeledWindowSet {
    std::vector<std::string> labels;
    std::vector<LabeledWindow> windows;
    std::int64_t n_skipped_undefined = 0;
};

/// Estimated probabilities over cluster sizes or ordinal patterns, with
/// counts and (once the bootstrap has run) per-label confidence bounds.
struct PatternDistribution {
    std::vector<std::string> labels;
    std::vector<std::int64_t> counts;
    std::vector<double> probs;
    std::int64_t denominator_count = 0;
    std::vector<double> ci_lo;  // empty until the bootstrap fills them
    std::vector<double> ci_hi;
    std::int64_t n_ties = 0;
    std::int64_t n_skipped_undefined = 0;
};

namespace detail {

inline PatternDistribution tally_windows(const LabeledWindowSet& set, errc empty_error,
                                         const std::string& empty_msg) {
    require(!set.windows.empty(), empty_error, empty_msg);
    PatternDistribution d;
    d.labels = set.labels;
    d.counts.assign(set.labels.size(), 0);
    for (const auto& w : set.windows) d.counts[static_cast<std::size_t>(w.label)]++;
    d.denominator_count = static_cast<std::int64_t>(set.windows.size());
    d.probs.resize(d.counts.size());
    for (std::size_t i = 0; i < d.counts.size(); ++i) {
        d.probs[i] = static_cast<double>(d.counts[i]) / static_cast<double>(d.denominator_count);
    }
    d.n_skipped_undefined = set.n_skipped_undefined;
    return d;
}

}  // namespace detail

/// Windows and size labels for the cluster-size family. Sizes above l_max
/// fall into the overflow bucket so the probabilities still sum to one.
inline LabeledWindowSet cluster_size_windows(const std::vector<ClusterIndex>& clusters,
                                             std::size_t l_max) {
    require(l_max >= 1, errc::invalid_argument, "l_max must be >= 1");
    LabeledWindowSet set;
    set.labels.reserve(l_max + 1);
    for (std::size_t l = 1; l <= l_max; ++l) set.labels.push_back(std::to_string(l));
    set.labels.push_back(">" + std::to_string(l_max));
    for (const auto& c : clusters) {
        const int label = c.length <= l_max ? static_cast<int>(c.length) - 1
                                            : static_cast<int>(l_max);
        set.windows.push_back({c.start - 1, c.start + c.length, label});
    }
    return set;
}

inline PatternDistribution cluster_size_distribution(std::span<const double> rv, double u,
                                                     std::size_t l_max) {
    const auto clusters = extract_clusters(rv, u);
    return detail::tally_windows(cluster_size_windows(clusters, l_max), errc::no_clusters,
                                 "no clusters at this threshold");
}

/// Windows and pattern labels for clusters of size >= l (or exactly l when
/// require_exact_size is set). The pattern is computed on stat_series over
/// the first l times of each qualifying cluster; windows with an undefined
/// statistic (NaN) are skipped and counted.
inline LabeledWindowSet pattern_windows(const std::vector<ClusterIndex>& clusters,
                                        std::span<const double> stat_series, std::size_t l,
                                        bool require_exact_size = false) {
    require(l >= 2 && l <= 5, errc::invalid_argument, "pattern length must be in [2,5]");
    LabeledWindowSet set;
    const auto perms = all_permutations(static_cast<int>(l));
    for (const auto& p : perms) set.labels.push_back(pattern_label(OrdinalPattern{p, false}));
    set.labels.push_back("ties");
    const int tie_label = static_cast<int>(perms.size());

    for (const auto& c : clusters) {
        if (require_exact_size ? (c.length != l) : (c.length < l)) continue;
        bool defined = true;
        for (std::size_t i = 0; i < l; ++i) {
            if (!std::isfinite(stat_series[c.start + i])) {
                defined = false;
                break;
            }
        }
        if (!defined) {
            set.n_skipped_undefined++;
            continue;
        }
        const auto pat = ordinal_pattern(stat_series.subspan(c.start, l));
        int label = tie_label;
        if (!pat.tie) {
            const auto it = std::find(perms.begin(), perms.end(), pat.ranks);
            label = static_cast<int>(it - perms.begin());
        }
        // The window that decides the event: left delimiter plus the first l
        // exceedances. The right delimiter is not needed for "size >= l".
        const std::size_t hi = require_exact_size ? c.start + c.length : c.start + l - 1;
        set.windows.push_back({c.start - 1, hi, label});
    }
    return set;
}

/// Ordinal-pattern distribution of stat_series over the first l times of
/// each u-exceedance cluster of cluster_rv with size >= l. Passing
/// stat_series = cluster_rv yields intensity patterns; per-time area or
/// centroid-coordinate series yield the corresponding functional patterns.
inline PatternDistribution pattern_distribution(std::span<const double> stat_series,
                                                std::span<const double> cluster_rv, double u,
                                                std::size_t l,
                                                bool require_exact_size = false) {
    require(stat_series.size() == cluster_rv.size(), errc::invalid_argument,
            "statistic and risk series must have equal length");
    const auto clusters = extract_clusters(cluster_rv, u);
    auto set = pattern_windows(clusters, stat_series, l, require_exact_size);
    auto d = detail::tally_windows(set, errc::no_clusters,
                                   "no clusters of the requested size at this threshold");
    d.n_ties = d.counts.back();
    return d;
}

}  // namespace stx
