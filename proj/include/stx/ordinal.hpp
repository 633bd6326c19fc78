#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "stx/types.hpp"

namespace stx {

/// Rank vector of a window, or the tie marker. Ties are exact floating-point
/// equality; tied windows carry an empty rank vector and are tallied in a
/// separate bucket downstream.
struct OrdinalPattern {
    std::vector<int> ranks;
    bool tie = false;

    bool operator==(const OrdinalPattern&) const = default;
};

/// Maps a window to the unique permutation pi of {1..l} with
/// v[i] < v[j]  <=>  pi[i] < pi[j].
inline OrdinalPattern ordinal_pattern(std::span<const double> v) {
    require(v.size() >= 2, errc::invalid_argument, "ordinal pattern needs length >= 2");
    for (double x : v) {
        require(std::isfinite(x), errc::non_finite, "ordinal pattern input must be finite");
    }
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (v[order[i]] == v[order[i - 1]]) return OrdinalPattern{{}, true};
    }
    OrdinalPattern out;
    out.ranks.resize(v.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        out.ranks[order[pos]] = static_cast<int>(pos) + 1;
    }
    return out;
}

inline std::string pattern_label(const OrdinalPattern& p) {
    if (p.tie) return "ties";
    std::string s = "(";
    for (std::size_t i = 0; i < p.ranks.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(p.ranks[i]);
    }
    s += ')';
    return s;
}

/// All l! rank vectors of length l in lexicographic order.
inline std::vector<std::vector<int>> all_permutations(int length) {
    std::vector<int> perm(static_cast<std::size_t>(length));
    std::iota(perm.begin(), perm.end(), 1);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

}  // namespace stx
