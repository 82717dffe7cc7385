// SPDX-License-Identifier: MIT
/**
 * @file natural_extension.hpp
 * @brief The natural extension of T on [0, theta]^2 and its two-dimensional
 *        Gauss-Kuzmin problem.
 *
 * Tbar(x, y) = (T x, 1/(y + eta(x) theta)) is a bijection of the square
 * (up to the lines x = 0 and y = 0) preserving gammabar, the measure with
 * density (1 + x y)^-2 / ln(1 + theta^2). After n steps the second
 * coordinate is [x_n theta, ..., x_2 theta, x_1 theta + y], which is s_n
 * seeded at y.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "thetaexp/chain_operator.hpp"
#include "thetaexp/measures.hpp"
#include "thetaexp/rng.hpp"
#include "thetaexp/theta_core.hpp"

namespace thetaexp {

struct PlanePoint {
    double x = 0.0;
    double y = 0.0;
};

inline PlanePoint nat_ext_step(const ThetaParams& p, PlanePoint pt) {
    pt.x = detail::checked_unit(p, pt.x, "x");
    pt.y = detail::checked_unit(p, pt.y, "y");
    detail::require(pt.x > 0.0, "forward step undefined at x = 0");
    const digit_t d = digit_index(p, pt.x);
    return {gauss_map(p, pt.x), std::min(1.0 / (pt.y + static_cast<double>(d) * p.theta), p.theta)};
}

inline PlanePoint nat_ext_inverse(const ThetaParams& p, PlanePoint pt) {
    pt.x = detail::checked_unit(p, pt.x, "x");
    pt.y = detail::checked_unit(p, pt.y, "y");
    detail::require(pt.y > 0.0, "inverse step undefined at y = 0");
    const digit_t d = digit_index(p, pt.y);
    return {std::min(1.0 / (pt.x + static_cast<double>(d) * p.theta), p.theta), gauss_map(p, pt.y)};
}

/// n-fold forward (n > 0) or inverse (n < 0) composition.
inline PlanePoint nat_ext_iterate(const ThetaParams& p, PlanePoint pt, int n) {
    const int steps = n < 0 ? -n : n;
    for (int k = 1; k <= steps; ++k) {
        const bool stuck = n > 0 ? pt.x == 0.0 : pt.y == 0.0;
        if (stuck) {
            throw invalid_parameter("orbit reaches a zero coordinate at step " + std::to_string(k) +
                                    " of " + std::to_string(n));
        }
        pt = n > 0 ? nat_ext_step(p, pt) : nat_ext_inverse(p, pt);
    }
    return pt;
}

/// Extended digit abar_l: x_l for l >= 1 and y_{1-l} for l <= 0.
inline digit_t extended_digit(const ThetaParams& p, PlanePoint pt, int l) {
    const bool forward = l >= 1;
    const double v = forward ? pt.x : pt.y;
    const auto want = static_cast<std::size_t>(forward ? l : 1 - l);
    const auto ds = expand_digits(p, v, want);
    if (ds.digits.size() < want) {
        throw invalid_parameter("extended digit " + std::to_string(l) +
                                " is undefined: the orbit reaches 0 first");
    }
    return ds.digits[want - 1];
}

/// gammabar(Tbar(R)) for a corner rectangle R, from the depth-one pushforward
/// Tbar(R) = union_i T(I(i) & [0, x]) x [u_i(y), u_i(0)].
inline double gamma_bar_image(const ThetaParams& p, const Rect& r) {
    const double th = p.theta;
    const double x = detail::checked_unit(p, r.x_max, "x_max");
    const double y = detail::checked_unit(p, r.y_max, "y_max");
    if (x == 0.0 || y == 0.0) {
        return 0.0;
    }
    const digit_t top = digit_index(p, x);
    double total = 0.0;
    // Branch top is cut at x; branches above it contribute full strips.
    const double cut = std::clamp(1.0 / x - static_cast<double>(top) * th, 0.0, th);
    const double ti = static_cast<double>(top);
    total += gamma_bar_box(p, cut, th, 1.0 / (y + ti * th), 1.0 / (ti * th));
    // Full strips for i > top telescope: sum_{i > top} ln((1+theta u_i(0))/(1+theta u_i(y))).
    total += std::log1p(y / ((ti + 1.0) * th)) / p.log_norm;
    return total;
}

struct Fbar2DResult {
    enum class Method { exact_cylinder, monte_carlo };

    int n = 0;
    Rect rect;
    double estimate = 0.0;
    Method method = Method::exact_cylinder;
    double truncation_mass = 0.0;     ///< exact method: error bound of the estimate
    double std_error = 0.0;           ///< Monte Carlo: binomial standard error
    std::uint64_t discarded = 0;      ///< Monte Carlo: samples that hit a zero coordinate
    double limit = 0.0;               ///< ln(1 + x y) / ln(1 + theta^2)
};

/// Fbar_n(x, y) = lambda(Tbar^n (u, v) in [0, x] x [0, y]) for (u, v) uniform on the square.
inline Fbar2DResult fbar_exact(const ThetaParams& p, int n, const Rect& rect, const ChainOptions& opt = {}) {
    detail::require(n >= 0, "n must be nonnegative");
    const Rect r = make_rect(p, rect.x_max, rect.y_max);
    ChainOperator op(p, opt);
    JointLaw law(op, n, 0.0, r.y_max, true);
    Fbar2DResult out;
    out.n = n;
    out.rect = r;
    out.estimate = std::clamp(law(r.x_max), 0.0, 1.0);
    out.truncation_mass = op.error_bound(n);
    out.limit = gamma_bar(p, r);
    return out;
}

inline Fbar2DResult fbar_mc(const ThetaParams& p, int n, const Rect& rect, std::uint64_t samples,
                            std::uint64_t seed) {
    detail::require(n >= 0, "n must be nonnegative");
    detail::require(samples >= 1, "samples must be at least 1");
    const Rect r = make_rect(p, rect.x_max, rect.y_max);
    const CounterRng rng(seed);
    std::uint64_t hits = 0, discarded = 0;
    for (std::uint64_t k = 0; k < samples; ++k) {
        PlanePoint pt{p.theta * rng.uniform(k, 0), p.theta * rng.uniform(k, 1)};
        bool ok = true;
        for (int j = 0; j < n; ++j) {
            if (pt.x == 0.0) {
                ok = false;
                break;
            }
            pt = nat_ext_step(p, pt);
        }
        if (!ok) {
            ++discarded;
            continue;
        }
        hits += (pt.x <= r.x_max && pt.y <= r.y_max) ? 1 : 0;
    }
    Fbar2DResult out;
    out.n = n;
    out.rect = r;
    out.method = Fbar2DResult::Method::monte_carlo;
    const double kept = static_cast<double>(samples - discarded);
    out.estimate = kept > 0 ? static_cast<double>(hits) / kept : 0.0;
    out.std_error = kept > 0 ? std::sqrt(out.estimate * (1.0 - out.estimate) / kept) : 0.0;
    out.discarded = discarded;
    out.limit = gamma_bar(p, r);
    return out;
}

/// Right side of the two-dimensional Gauss-Kuzmin recursion applied to F:
///
///   sum_{i >= l} [F(u_i(0), theta) - F(u_i(x), theta)]
///       - [F(u_l(0), c) - F(u_l(x), c)],   l = eta(y), c = 1/y - l theta,
///
/// with the series cut at i_max.
template <class F>
double gk2d_apply(const ThetaParams& p, F&& fbar, double x, double y, digit_t i_max) {
    const double th = p.theta;
    x = detail::checked_unit(p, x, "x");
    y = detail::checked_unit(p, y, "y");
    detail::require(y > 0.0, "y must be positive");
    const digit_t l = digit_index(p, y);
    const double ld = static_cast<double>(l);
    double acc = 0.0;
    for (digit_t i = l; i <= i_max; ++i) {
        const double id = static_cast<double>(i);
        acc += fbar(1.0 / (id * th), th) - fbar(1.0 / (id * th + x), th);
    }
    const double c = std::clamp(1.0 / y - ld * th, 0.0, th);
    acc -= fbar(1.0 / (ld * th), c) - fbar(1.0 / (ld * th + x), c);
    return acc;
}

struct FixedPointResidual {
    double max_residual = 0.0;
    double tail_bound = 0.0;  ///< sup|dF/dx| x / (theta^2 i_max), maximized over the rects
};

/// Max deviation of ln(1 + x y) from its image under gk2d_apply.
inline FixedPointResidual gk2d_fixed_point_residual(const ThetaParams& p, const std::vector<Rect>& rects,
                                                    digit_t i_max) {
    detail::require(i_max >= p.m, "i_max must be at least m");
    auto f = [](double u, double v) { return std::log1p(u * v); };
    FixedPointResidual out;
    const double lip = p.theta;  // d/dx ln(1 + x y) <= y <= theta
    for (const auto& r : rects) {
        const double rhs = gk2d_apply(p, f, r.x_max, r.y_max, i_max);
        out.max_residual = std::max(out.max_residual, std::abs(rhs - f(r.x_max, r.y_max)));
        out.tail_bound = std::max(out.tail_bound,
                                  lip * r.x_max / (p.theta * p.theta * static_cast<double>(i_max)));
    }
    return out;
}

}  // namespace thetaexp
