#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "stx/types.hpp"

namespace stx {

struct Coord {
    double x = 0.0;
    double y = 0.0;
};

enum class CoordSystem : int { lonlat = 0, planar_km = 1 };

inline const char* coord_system_name(CoordSystem cs) {
    return cs == CoordSystem::lonlat ? "lonlat" : "planar_km";
}

/// Finite set of observation sites with a declared coordinate system.
/// Immutable after construction.
class SpatialGrid {
public:
    SpatialGrid(std::vector<Coord> sites, CoordSystem system)
        : sites_(std::move(sites)), system_(system) {
        require(!sites_.empty(), errc::invalid_argument, "grid needs at least one site");
        for (const auto& c : sites_) {
            require(std::isfinite(c.x) && std::isfinite(c.y), errc::non_finite,
                    "grid coordinates must be finite");
        }
        auto sorted = sites_;
        std::sort(sorted.begin(), sorted.end(), [](const Coord& a, const Coord& b) {
            return a.x < b.x || (a.x == b.x && a.y < b.y);
        });
        for (std::size_t i = 1; i < sorted.size(); ++i) {
            require(sorted[i].x != sorted[i - 1].x || sorted[i].y != sorted[i - 1].y,
                    errc::invalid_argument, "grid contains duplicate site coordinates");
        }
    }

    /// Regular rows x cols lattice in row-major site order.
    static SpatialGrid regular(std::size_t rows, std::size_t cols, double spacing,
                               CoordSystem system = CoordSystem::planar_km,
                               Coord origin = {0.0, 0.0}) {
        require(rows >= 1 && cols >= 1, errc::invalid_argument, "grid must be non-empty");
        require(spacing > 0.0 && std::isfinite(spacing), errc::invalid_argument,
                "grid spacing must be positive");
        std::vector<Coord> sites;
        sites.reserve(rows * cols);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c)
                sites.push_back({origin.x + spacing * static_cast<double>(c),
                                 origin.y + spacing * static_cast<double>(r)});
        return SpatialGrid(std::move(sites), system);
    }

    std::size_t site_count() const noexcept { return sites_.size(); }
    const Coord& site(std::size_t i) const { return sites_[i]; }
    const std::vector<Coord>& sites() const noexcept { return sites_; }
    CoordSystem system() const noexcept { return system_; }

    /// Great-circle (lonlat) or Euclidean (planar) distance in km.
    double distance_km(std::size_t i, std::size_t j) const {
        const Coord& a = sites_[i];
        const Coord& b = sites_[j];
        if (system_ == CoordSystem::planar_km) {
            return std::hypot(a.x - b.x, a.y - b.y);
        }
        constexpr double kEarthRadiusKm = 6371.0;
        constexpr double kDeg = 0.017453292519943295;
        const double lat1 = a.y * kDeg, lat2 = b.y * kDeg;
        const double dlat = (b.y - a.y) * kDeg, dlon = (b.x - a.x) * kDeg;
        const double h = std::sin(dlat / 2) * std::sin(dlat / 2) +
                         std::cos(lat1) * std::cos(lat2) * std::sin(dlon / 2) * std::sin(dlon / 2);
        return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
    }

    /// Index of the site closest to the coordinate centroid of the grid.
    std::size_t central_site() const {
        double cx = 0.0, cy = 0.0;
        for (const auto& c : sites_) {
            cx += c.x;
            cy += c.y;
        }
        cx /= static_cast<double>(sites_.size());
        cy /= static_cast<double>(sites_.size());
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < sites_.size(); ++i) {
            const double d = std::hypot(sites_[i].x - cx, sites_[i].y - cy);
            if (d < best_d) {
                best_d = d;
                best = i;
            }
        }
        return best;
    }

private:
    std::vector<Coord> sites_;
    CoordSystem system_;
};

using GridPtr = std::shared_ptr<const SpatialGrid>;

}  // namespace stx
