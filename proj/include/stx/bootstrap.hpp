#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "stx/clusters.hpp"
#include "stx/quantile.hpp"
#include "stx/rng.hpp"
#include "stx/types.hpp"

namespace stx {

enum class MultiplierLaw { gaussian, rademacher };

struct BootstrapConfig {
    std::size_t block_length = 1000;
    std::size_t replicates = 1000;
    MultiplierLaw law = MultiplierLaw::gaussian;
    double ci_level = 0.95;
    std::uint64_t seed = 1;

    void validate(std::size_t largest_window) const {
        require(replicates >= 100, errc::invalid_argument, "bootstrap needs >= 100 replicates");
        require(ci_level > 0.0 && ci_level < 1.0, errc::invalid_argument,
                "ci level must be in (0,1)");
        require(block_length >= largest_window + 2, errc::invalid_argument,
                "block length must be >= largest analyzed window + 2");
    }
};

/// Per-block numerator counts (one row per label) and denominator counts for
/// one family of labeled windows.
struct BlockCounts {
    std::vector<std::string> labels;
    std::size_t n_blocks = 0;
    std::vector<std::vector<std::int64_t>> numerators;  // [label][block]
    std::vector<std::int64_t> denominators;             // [block]
};

/// Splits the time axis into consecutive disjoint blocks of block_length
/// points (partial trailing block dropped) and counts the windows fully
/// contained in each block.
inline BlockCounts block_counts(const LabeledWindowSet& set, std::size_t n_times,
                                std::size_t block_length) {
    require(block_length >= 1, errc::invalid_argument, "block length must be >= 1");
    require(n_times >= 2 * block_length, errc::invalid_argument,
            "series must cover at least two blocks");
    BlockCounts bc;
    bc.labels = set.labels;
    bc.n_blocks = n_times / block_length;
    bc.numerators.assign(set.labels.size(), std::vector<std::int64_t>(bc.n_blocks, 0));
    bc.denominators.assign(bc.n_blocks, 0);
    for (const auto& w : set.windows) {
        const std::size_t j = w.lo / block_length;
        if (j >= bc.n_blocks) continue;
        if (w.hi <= (j + 1) * block_length - 1) {
            bc.numerators[static_cast<std::size_t>(w.label)][j]++;
            bc.denominators[j]++;
        }
    }
    return bc;
}

struct BootstrapInterval {
    double point = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

struct BootstrapResult {
    std::vector<std::string> labels;
    std::vector<BootstrapInterval> intervals;
    std::int64_t n_degenerate = 0;  // replicates discarded for nonpositive denominator
};

/// Draws the full replicate-by-block multiplier matrix up front so that any
/// evaluation order (or parallel schedule) reproduces the same intervals.
inline std::vector<std::vector<double>> draw_multipliers(const BootstrapConfig& cfg,
                                                         std::size_t n_blocks) {
    std::vector<std::vector<double>> xi(cfg.replicates, std::vector<double>(n_blocks));
    Rng rng(cfg.seed);
    for (auto& row : xi) {
        for (auto& v : row) {
            v = cfg.law == MultiplierLaw::gaussian ? rng.normal() : rng.sign();
        }
    }
    return xi;
}

/// Multiplier-weighted ratio replicates: for multipliers xi the replicate of
/// each label is sum_j (1+xi_j) N_j / sum_j (1+xi_j) D_j. Replicates whose
/// weighted denominator is <= 0 are discarded and counted. Interval bounds
/// are empirical quantiles of the surviving replicates.
inline BootstrapResult bootstrap_ci(const BlockCounts& bc, const BootstrapConfig& cfg,
                                    const std::vector<std::vector<double>>& multipliers) {
    const std::size_t n_labels = bc.labels.size();
    std::int64_t total_den = 0;
    for (auto d : bc.denominators) total_den += d;
    require(total_den > 0, errc::zero_denominator, "no denominator events in any block");

    BootstrapResult out;
    out.labels = bc.labels;
    out.intervals.resize(n_labels);

    std::vector<std::int64_t> total_num(n_labels, 0);
    for (std::size_t l = 0; l < n_labels; ++l) {
        for (auto v : bc.numerators[l]) total_num[l] += v;
    }
    for (std::size_t l = 0; l < n_labels; ++l) {
        out.intervals[l].point =
            static_cast<double>(total_num[l]) / static_cast<double>(total_den);
    }

    std::vector<std::vector<double>> replicates(n_labels);
    for (auto& r : replicates) r.reserve(multipliers.size());
    for (const auto& xi : multipliers) {
        require(xi.size() == bc.n_blocks, errc::invalid_argument,
                "multiplier row length must equal block count");
        double den = 0.0;
        for (std::size_t j = 0; j < bc.n_blocks; ++j) {
            den += (1.0 + xi[j]) * static_cast<double>(bc.denominators[j]);
        }
        if (den <= 0.0) {
            out.n_degenerate++;
            continue;
        }
        for (std::size_t l = 0; l < n_labels; ++l) {
            double num = 0.0;
            for (std::size_t j = 0; j < bc.n_blocks; ++j) {
                num += (1.0 + xi[j]) * static_cast<double>(bc.numerators[l][j]);
            }
            replicates[l].push_back(num / den);
        }
    }
    require(!multipliers.empty() && out.n_degenerate < static_cast<std::int64_t>(multipliers.size()),
            errc::degenerate_model, "all bootstrap replicates had nonpositive denominators");
    if (cfg.law == MultiplierLaw::gaussian && bc.n_blocks >= 10 &&
        static_cast<double>(out.n_degenerate) >
            0.05 * static_cast<double>(multipliers.size())) {
        std::fprintf(stderr,
                     "warning: %lld of %zu bootstrap replicates were degenerate; "
                     "the block partition may be too coarse\n",
                     static_cast<long long>(out.n_degenerate), multipliers.size());
    }

    const double alpha = (1.0 - cfg.ci_level) / 2.0;
    for (std::size_t l = 0; l < n_labels; ++l) {
        out.intervals[l].lo = empirical_quantile(replicates[l], alpha);
        out.intervals[l].hi = empirical_quantile(replicates[l], 1.0 - alpha);
    }
    return out;
}

inline BootstrapResult bootstrap_ci(const BlockCounts& bc, const BootstrapConfig& cfg) {
    return bootstrap_ci(bc, cfg, draw_multipliers(cfg, bc.n_blocks));
}

}  // namespace stx
