// SPDX-License-Identifier: MIT
/**
 * @file measures.hpp
 * @brief Invariant measure, its planar extension, and the conditional family.
 *
 * gamma is the T-invariant probability on [0, theta] with density
 * theta / ((1 + theta x) ln(1 + theta^2)). Its extension to the square has
 * density (1 + x y)^-2 / ln(1 + theta^2). gamma_a (a in [0, theta]) is the
 * family of conditional laws of the next state given the reversed past,
 * and P_i(a) is the probability that the next digit equals i.
 */

#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "thetaexp/errors.hpp"
#include "thetaexp/theta_core.hpp"

namespace thetaexp {

/// gamma([0, x]) = ln(1 + theta x) / ln(1 + theta^2).
inline double gamma_cdf(const ThetaParams& p, double x) {
    x = detail::checked_unit(p, x);
    return std::log1p(p.theta * x) / p.log_norm;
}

/// Corner rectangle [0, x_max] x [0, y_max].
struct Rect {
    double x_max = 0.0;
    double y_max = 0.0;
};

inline Rect make_rect(const ThetaParams& p, double x_max, double y_max) {
    return {detail::checked_unit(p, x_max, "x_max"), detail::checked_unit(p, y_max, "y_max")};
}

/// Extended measure of a corner rectangle: ln(1 + x y) / ln(1 + theta^2).
inline double gamma_bar(const ThetaParams& p, const Rect& r) {
    const double x = detail::checked_unit(p, r.x_max, "x_max");
    const double y = detail::checked_unit(p, r.y_max, "y_max");
    return std::log1p(x * y) / p.log_norm;
}

/// Extended measure of [x0, x1] x [y0, y1] by inclusion-exclusion of corners.
inline double gamma_bar_box(const ThetaParams& p, double x0, double x1, double y0, double y1) {
    detail::require(x0 <= x1 && y0 <= y1, "box corners out of order");
    auto corner = [&](double x, double y) { return gamma_bar(p, {x, y}); };
    return corner(x1, y1) - corner(x0, y1) - corner(x1, y0) + corner(x0, y0);
}

/// gamma_a([0, x]) = (a theta + 1) x / ((a x + 1) theta).
inline double gamma_a_cdf(const ThetaParams& p, double a, double x) {
    a = detail::checked_unit(p, a, "a");
    x = detail::checked_unit(p, x);
    return (a * p.theta + 1.0) * x / ((a * x + 1.0) * p.theta);
}

/// Law of T^n given the first n digits, parameterized by s = s_{n,a}.
inline double conditional_Tn_cdf(const ThetaParams& p, double s, double x) {
    return gamma_a_cdf(p, s, x);
}

namespace detail {

// Unchecked kernels for inner loops.
inline double p_i(double theta, double i, double x) noexcept {
    return (x * theta + 1.0) / ((x + i * theta) * (x + (i + 1.0) * theta));
}

inline double gamma_a_kernel(double theta, double s, double x) noexcept {
    return (s * theta + 1.0) * x / ((s * x + 1.0) * theta);
}

}  // namespace detail

/// P_i(x) = (x theta + 1) / ((x + i theta)(x + (i+1) theta)).
inline double transition_prob(const ThetaParams& p, digit_t i, double x) {
    detail::require(i >= p.m, "digit " + std::to_string(i) + " is below m");
    x = detail::checked_unit(p, x);
    return detail::p_i(p.theta, static_cast<double>(i), x);
}

/// Sum_{i >= first} P_i(x), which telescopes to (x theta + 1) / (theta (x + first theta)).
inline double transition_tail_mass(const ThetaParams& p, digit_t first, double x) {
    detail::require(first >= p.m, "tail must start at a digit >= m");
    x = detail::checked_unit(p, x);
    return (x * p.theta + 1.0) / (p.theta * (x + static_cast<double>(first) * p.theta));
}

/// P_{i_1}(a) P_{i_2}(u_{i_1}(a)) ... P_{i_n}(u_{i_{n-1} ... i_1}(a)).
inline double transition_product(const ThetaParams& p, std::span<const digit_t> digits, double a) {
    detail::check_digits(p, digits, false);
    double s = detail::checked_unit(p, a, "a");
    double prob = 1.0;
    for (digit_t d : digits) {
        const double i = static_cast<double>(d);
        prob *= detail::p_i(p.theta, i, s);
        s = 1.0 / (i * p.theta + s);
    }
    return prob;
}

struct SChainState {
    double a = 0.0;
    std::vector<double> values;  ///< s_1, ..., s_n

    [[nodiscard]] double last() const noexcept { return values.empty() ? a : values.back(); }
};

/// s_0 = a, s_k = 1 / (a_k theta + s_{k-1}).
inline SChainState s_chain(const ThetaParams& p, double a, std::span<const digit_t> digits) {
    detail::check_digits(p, digits, true);
    SChainState st;
    st.a = detail::checked_unit(p, a, "a");
    st.values.reserve(digits.size());
    double s = st.a;
    for (digit_t d : digits) {
        s = 1.0 / (static_cast<double>(d) * p.theta + s);
        st.values.push_back(s);
    }
    return st;
}

}  // namespace thetaexp
