// SPDX-License-Identifier: MIT
/**
 * @file grid_function.hpp
 * @brief Uniform-grid samples of a function on [0, theta].
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "thetaexp/errors.hpp"
#include "thetaexp/theta_core.hpp"

namespace thetaexp {

/// Samples at x_k = k theta / n_cells, k = 0..n_cells, read back as the
/// piecewise-linear interpolant.
class GridFunction {
public:
    GridFunction() = default;

    GridFunction(double theta, std::vector<double> values) : theta_(theta), values_(std::move(values)) {
        detail::require(values_.size() >= 2, "a grid function needs at least one cell");
        for (double v : values_) {
            detail::require(std::isfinite(v), "grid function values must be finite");
        }
        h_ = theta_ / static_cast<double>(n_cells());
    }

    template <class F>
    static GridFunction sample(const ThetaParams& p, std::size_t n_cells, F&& f) {
        detail::require(n_cells >= 1, "n_cells must be positive");
        std::vector<double> v(n_cells + 1);
        for (std::size_t k = 0; k <= n_cells; ++k) {
            v[k] = f(p.theta * static_cast<double>(k) / static_cast<double>(n_cells));
        }
        return GridFunction(p.theta, std::move(v));
    }

    [[nodiscard]] std::size_t n_cells() const noexcept { return values_.size() - 1; }
    [[nodiscard]] double theta() const noexcept { return theta_; }
    [[nodiscard]] double spacing() const noexcept { return h_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t k) const { return values_[k]; }

    [[nodiscard]] double node(std::size_t k) const noexcept {
        return theta_ * static_cast<double>(k) / static_cast<double>(n_cells());
    }

    /// Linear interpolation; arguments are clamped to [0, theta].
    [[nodiscard]] double operator()(double x) const noexcept {
        const double t = std::clamp(x / h_, 0.0, static_cast<double>(n_cells()));
        const auto k = std::min(static_cast<std::size_t>(t), n_cells() - 1);
        const double frac = t - static_cast<double>(k);
        return values_[k] + frac * (values_[k + 1] - values_[k]);
    }

    [[nodiscard]] double sup_abs() const noexcept {
        double s = 0.0;
        for (double v : values_) {
            s = std::max(s, std::abs(v));
        }
        return s;
    }

private:
    double theta_ = 1.0;
    double h_ = 1.0;
    std::vector<double> values_{0.0, 0.0};
};

/// Total variation of the piecewise-linear representative.
inline double variation(const GridFunction& f) {
    const auto& v = f.values();
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
        s += std::abs(v[k + 1] - v[k]);
    }
    return s;
}

}  // namespace thetaexp
