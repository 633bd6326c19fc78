#pragma once

#include <cmath>

#include "stx/types.hpp"

namespace stx {

/// Separable space-time variogram
///   gamma(h, t) = ||(a1*h1, a2*h2)||^theta_s + |t|^theta_t.
struct VariogramSpec {
    double ax = 2.6;
    double ay = 2.4;
    double theta_s = 1.9;
    double theta_t = 1.1;

    void validate() const {
        require(ax > 0.0 && ay > 0.0, errc::invalid_argument,
                "variogram anisotropy factors must be positive");
        require(theta_s > 0.0 && theta_s <= 2.0, errc::invalid_argument,
                "spatial exponent must be in (0,2]");
        require(theta_t > 0.0 && theta_t <= 2.0, errc::invalid_argument,
                "temporal exponent must be in (0,2]");
    }
};

inline double variogram(const VariogramSpec& v, double dx, double dy, double dt) {
    const double hs = std::hypot(v.ax * dx, v.ay * dy);
    const double s = hs > 0.0 ? std::pow(hs, v.theta_s) : 0.0;
    const double at = std::abs(dt);
    const double t = at > 0.0 ? std::pow(at, v.theta_t) : 0.0;
    return s + t;
}

struct SpaceTimeCoord {
    double x = 0.0;
    double y = 0.0;
    double t = 0.0;
};

inline double variogram(const VariogramSpec& v, const SpaceTimeCoord& a,
                        const SpaceTimeCoord& b) {
    return variogram(v, a.x - b.x, a.y - b.y, a.t - b.t);
}

}  // namespace stx
