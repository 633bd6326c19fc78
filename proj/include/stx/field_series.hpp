#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "stx/grid.hpp"
#include "stx/types.hpp"

namespace stx {

/// Dense time-major matrix of a spatial field observed on a fixed grid at
/// discrete times. Gap-free and finite by construction; immutable afterwards.
class FieldSeries {
public:
    FieldSeries(GridPtr grid, std::size_t n_times, std::vector<double> values)
        : grid_(std::move(grid)), n_times_(n_times), values_(std::move(values)) {
        require(grid_ != nullptr, errc::invalid_argument, "field series needs a grid");
        require(n_times_ >= 1, errc::invalid_argument, "field series needs at least one time");
        require(values_.size() == n_times_ * grid_->site_count(), errc::invalid_argument,
                "value matrix must be n_times x site_count");
        for (double v : values_) {
            require(std::isfinite(v), errc::non_finite, "field values must be finite");
        }
    }

    const SpatialGrid& grid() const noexcept { return *grid_; }
    const GridPtr& grid_ptr() const noexcept { return grid_; }
    std::size_t n_times() const noexcept { return n_times_; }
    std::size_t site_count() const noexcept { return grid_->site_count(); }

    double at(std::size_t t, std::size_t s) const { return values_[t * site_count() + s]; }

    /// All sites at one time, in site order.
    std::span<const double> field_at(std::size_t t) const {
        return {values_.data() + t * site_count(), site_count()};
    }

    const std::vector<double>& values() const noexcept { return values_; }

private:
    GridPtr grid_;
    std::size_t n_times_;
    std::vector<double> values_;
};

}  // namespace stx
