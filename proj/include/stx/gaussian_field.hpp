#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "stx/rng.hpp"
#include "stx/types.hpp"
#include "stx/variogram.hpp"

namespace stx {

/// Covariance of the variogram-increment process pinned at the anchor:
///   Cov(W(a), W(b)) = gamma(a - x0) + gamma(b - x0) - gamma(a - b),
/// so Var(W(x)) = 2 gamma(x - x0) and exp(W(x) - gamma(x - x0)) has unit
/// mean. The anchor row/column is excluded; W(x0) = 0 identically.
inline Eigen::MatrixXd increment_covariance(const VariogramSpec& spec,
                                            const std::vector<SpaceTimeCoord>& points,
                                            std::size_t anchor) {
    require(anchor < points.size(), errc::invalid_argument, "anchor must be a domain point");
    const std::size_t n = points.size() - 1;
    std::vector<std::size_t> idx;
    idx.reserve(n);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i != anchor) idx.push_back(i);
    }
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = variogram(spec, points[idx[i]], points[anchor]);
    Eigen::MatrixXd cov(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const double c = g[i] + g[j] - variogram(spec, points[idx[i]], points[idx[j]]);
            cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = c;
            cov(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = c;
        }
    }
    return cov;
}

/// Lower Cholesky factor stored as a packed row-major triangle. Rows can be
/// evaluated independently, which lets callers skip rows or stop early.
/// Long-range variograms are near-singular, so the diagonal gets jitter
/// 1e-10*(1+max diag), escalated tenfold up to 1e-6 before giving up.
template <typename T>
class CholeskyPacked {
public:
    CholeskyPacked() = default;

    explicit CholeskyPacked(const Eigen::MatrixXd& cov) {
        n_ = static_cast<std::size_t>(cov.rows());
        require(cov.rows() == cov.cols(), errc::invalid_argument, "covariance must be square");
        if (n_ == 0) return;
        const double max_diag = cov.diagonal().maxCoeff();
        Eigen::LLT<Eigen::MatrixXd> llt;
        bool ok = false;
        for (double eps = 1e-10; eps <= 1.5e-6; eps *= 10.0) {
            Eigen::MatrixXd c = cov;
            c.diagonal().array() += eps * (1.0 + max_diag);
            llt.compute(c);
            if (llt.info() == Eigen::Success) {
                ok = true;
                break;
            }
        }
        require(ok, errc::factorization_failed,
                "covariance not positive definite after jitter escalation");
        data_.resize(n_ * (n_ + 1) / 2);
        const auto& L = llt.matrixLLT();
        for (std::size_t i = 0; i < n_; ++i) {
            T* row = data_.data() + offset(i);
            for (std::size_t j = 0; j <= i; ++j) {
                row[j] = static_cast<T>(L(static_cast<Eigen::Index>(i),
                                          static_cast<Eigen::Index>(j)));
            }
        }
    }

    std::size_t dim() const noexcept { return n_; }

    double row_dot(std::size_t i, const T* z) const {
        const T* row = data_.data() + offset(i);
        double acc = 0.0;
        for (std::size_t j = 0; j <= i; ++j) acc += static_cast<double>(row[j]) * static_cast<double>(z[j]);
        return acc;
    }

private:
    static std::size_t offset(std::size_t i) { return i * (i + 1) / 2; }

    std::size_t n_ = 0;
    std::vector<T> data_;
};

/// Draws the increment field W on the given space-time points, anchored at
/// points[anchor] where W is exactly zero.
inline std::vector<double> gaussian_increment_field(const VariogramSpec& spec,
                                                    const std::vector<SpaceTimeCoord>& points,
                                                    std::size_t anchor, Rng& rng) {
    const CholeskyPacked<double> chol(increment_covariance(spec, points, anchor));
    std::vector<double> z(chol.dim());
    for (auto& v : z) v = rng.normal();
    std::vector<double> out(points.size(), 0.0);
    std::size_t row = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i == anchor) continue;
        out[i] = chol.row_dot(row, z.data());
        ++row;
    }
    return out;
}

}  // namespace stx
