// SPDX-License-Identifier: MIT
/**
 * @file transfer_operator.hpp
 * @brief Perron-Frobenius operator of T on grid functions.
 *
 * (U f)(x) = sum_{i >= m} P_i(x) f(1/(x + i theta)) is the transfer operator
 * of T with respect to gamma. U_inf f = integral of f against gamma is its
 * invariant functional, and on functions of bounded variation
 *
 *     var U^n f <= var f / (m+1)^n,   sup |U^n f - U_inf f| <= var f / (m+1)^n.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "thetaexp/grid_function.hpp"
#include "thetaexp/measures.hpp"

namespace thetaexp {

/// One application of U; the branches i > i_max are lumped at a single point
/// carrying their exact total mass.
inline GridFunction apply_U(const ThetaParams& p, const GridFunction& f, digit_t i_max) {
    detail::require(i_max >= p.m, "i_max must be at least m");
    const double th = p.theta;
    const auto n = f.n_cells();
    std::vector<double> out(n + 1);
    const double i_end = static_cast<double>(i_max);
    for (std::size_t k = 0; k <= n; ++k) {
        const double x = f.node(k);
        double acc = 0.0;
        for (double i = static_cast<double>(p.m); i <= i_end; i += 1.0) {
            acc += detail::p_i(th, i, x) * f(1.0 / (x + i * th));
        }
        const double tail = (x * th + 1.0) / (th * (x + (i_end + 1.0) * th));
        acc += tail * f(1.0 / (x + (i_end + 1.0) * th + 0.5 * th));
        out[k] = acc;
    }
    return GridFunction(th, std::move(out));
}

namespace detail {

// 1 - log1p(z)/z, stable for small z.
inline double one_minus_log1p_ratio(double z) {
    if (z < 1e-3) {
        return z * (0.5 - z * (1.0 / 3.0 - z * (0.25 - z * (0.2 - z / 6.0))));
    }
    return 1.0 - std::log1p(z) / z;
}

}  // namespace detail

/// Integral of the piecewise-linear representative of f against gamma, exact
/// cell by cell.
inline double u_infinity(const ThetaParams& p, const GridFunction& f) {
    const double th = p.theta;
    const double h = f.spacing();
    double acc = 0.0;
    for (std::size_t k = 0; k < f.n_cells(); ++k) {
        const double x0 = f.node(k);
        const double z = th * h / (1.0 + th * x0);
        const double dlog = std::log1p(z);  // integral of theta/(1+theta x) over the cell
        // integral of (x - x0) theta/(1+theta x) over the cell
        const double first_moment = h * detail::one_minus_log1p_ratio(z);
        const double slope = (f[k + 1] - f[k]) / h;
        acc += f[k] * dlog + slope * first_moment;
    }
    return acc / p.log_norm;
}

struct ContractionReport {
    int n_steps = 0;
    std::size_t n_cells = 0;
    std::vector<double> variations;      ///< var U^k f, k = 0..n
    std::vector<double> sup_deviations;  ///< sup |U^k f - U_inf f|
    std::vector<double> bounds;          ///< var f / (m+1)^k
    std::vector<double> drifts;          ///< |U_inf U^k f - U_inf f| on the grid
    double slack = 0.0;                  ///< 1e-6 + max drift
    bool all_pass = false;
};

/// Iterates apply_U and checks both contraction inequalities at every step.
///
/// On the grid, sup |g - U_inf f| <= var g + |U_inf g - U_inf f|, so the
/// measured drift of U_inf under the discrete iteration is the resolution
/// allowance.
inline ContractionReport contraction_report(const ThetaParams& p, const GridFunction& f, int n,
                                            digit_t i_max) {
    detail::require(n >= 1, "n must be at least 1");
    ContractionReport r;
    r.n_steps = n;
    r.n_cells = f.n_cells();
    const double var0 = variation(f);
    const double target = u_infinity(p, f);
    const double q = 1.0 / static_cast<double>(p.m + 1);
    GridFunction g = f;
    double bound = var0;
    for (int k = 0; k <= n; ++k) {
        if (k > 0) {
            g = apply_U(p, g, i_max);
            bound *= q;
        }
        double dev = 0.0;
        for (double v : g.values()) {
            dev = std::max(dev, std::abs(v - target));
        }
        r.variations.push_back(variation(g));
        r.sup_deviations.push_back(dev);
        r.bounds.push_back(bound);
        r.drifts.push_back(std::abs(u_infinity(p, g) - target));
    }
    r.slack = 1e-6 + *std::max_element(r.drifts.begin(), r.drifts.end());
    r.all_pass = true;
    for (int k = 0; k <= n; ++k) {
        const double limit = r.bounds[k] * (1.0 + 1e-6) + r.slack;
        r.all_pass = r.all_pass && r.variations[k] <= limit && r.sup_deviations[k] <= limit;
    }
    return r;
}

}  // namespace thetaexp
