// SPDX-License-Identifier: MIT
/**
 * @file theta_core.hpp
 * @brief The theta-expansion dynamical system on [0, theta].
 *
 * For an integer m >= 1 and theta = 1/sqrt(m), every x in (0, theta) has a
 * continued-fraction expansion x = [a_1 theta, a_2 theta, ...] with integer
 * digits a_n >= m. The digits are produced by the Gauss-like map
 * T(x) = 1/x - theta * floor(1/(x theta)). This header provides the parameter
 * pack, the map, digit extraction, convergents, finite continued-fraction
 * evaluation and cylinder intervals.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "thetaexp/errors.hpp"

namespace thetaexp {

using digit_t = std::int64_t;

/// Returned by digit_index for x = 0, where the index map is infinite.
inline constexpr digit_t kInfiniteDigit = std::numeric_limits<digit_t>::max();

/// Digits larger than this saturate (x closer to 0 than ~1e-18).
inline constexpr digit_t kMaxDigit = digit_t{1} << 62;

struct ThetaParams {
    std::int64_t m = 1;
    double theta = 1.0;
    double log_norm = 0.6931471805599453;  ///< ln(1 + theta^2)

    /// Tolerance applied to the [0, theta] domain checks.
    [[nodiscard]] double domain_slack() const noexcept {
        return 8.0 * std::numeric_limits<double>::epsilon() * theta;
    }
};

inline ThetaParams make_params(std::int64_t m) {
    detail::require(m >= 1, "m must be a positive integer, got " + std::to_string(m));
    ThetaParams p;
    p.m = m;
    p.theta = 1.0 / std::sqrt(static_cast<double>(m));
    p.log_norm = std::log1p(1.0 / static_cast<double>(m));
    return p;
}

namespace detail {

/// Validates x in [0, theta] (with a few ulps of slack) and clamps it.
inline double checked_unit(const ThetaParams& p, double x, const char* name = "x") {
    if (!(x >= -p.domain_slack() && x <= p.theta + p.domain_slack())) {
        throw invalid_parameter(std::string(name) + " must lie in [0, theta], got " +
                                std::to_string(x));
    }
    return std::clamp(x, 0.0, p.theta);
}

inline void check_digits(const ThetaParams& p, std::span<const digit_t> digits, bool allow_empty) {
    if (!allow_empty && digits.empty()) {
        throw invalid_parameter("digit sequence must be nonempty");
    }
    for (digit_t d : digits) {
        if (d < p.m) {
            throw invalid_parameter("digit " + std::to_string(d) + " is below m = " +
                                    std::to_string(p.m));
        }
    }
}

}  // namespace detail

/// Quantized index map: floor(1/(x theta)) for x > 0, kInfiniteDigit at 0.
inline digit_t digit_index(const ThetaParams& p, double x) {
    x = detail::checked_unit(p, x);
    if (x == 0.0) {
        return kInfiniteDigit;
    }
    const double q = std::floor(1.0 / (x * p.theta));
    if (q >= static_cast<double>(kMaxDigit)) {
        return kMaxDigit;
    }
    // x <= theta implies q >= m up to rounding; the clamp absorbs the last ulp.
    return std::max(static_cast<digit_t>(q), p.m);
}

/// T(x) = 1/x - theta * floor(1/(x theta)), T(0) = 0. Always lands in [0, theta].
/// Results within the cancellation error of 1/x - d theta snap to 0, so left
/// cylinder endpoints such as x = theta map to 0 exactly.
inline double gauss_map(const ThetaParams& p, double x) {
    x = detail::checked_unit(p, x);
    if (x == 0.0) {
        return 0.0;
    }
    const digit_t d = digit_index(p, x);
    const double inv = 1.0 / x;
    const double y = inv - static_cast<double>(d) * p.theta;
    if (y <= 4.0 * std::numeric_limits<double>::epsilon() * inv) {
        return 0.0;
    }
    return std::min(y, p.theta);
}

/// Inverse branch u_i(x) = 1/(x + i theta), a right inverse of T.
inline double inverse_branch(const ThetaParams& p, digit_t i, double x) {
    return 1.0 / (x + static_cast<double>(i) * p.theta);
}

struct DigitSequence {
    std::vector<digit_t> digits;
    bool terminated = false;  ///< the orbit reached 0 before the requested length
};

inline DigitSequence expand_digits(const ThetaParams& p, double x, std::size_t n) {
    x = detail::checked_unit(p, x);
    DigitSequence out;
    out.digits.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (x == 0.0) {
            out.terminated = true;
            break;
        }
        out.digits.push_back(digit_index(p, x));
        x = gauss_map(p, x);
    }
    return out;
}

struct Convergent {
    int index = 0;
    double p = 0.0;
    double q = 0.0;

    [[nodiscard]] double value() const noexcept { return p / q; }
};

/// (p_k, q_k) for k = 1..n from p_k = a_k theta p_{k-1} + p_{k-2} (same for q),
/// p_{-1} = 1, p_0 = 0, q_{-1} = 0, q_0 = 1.
inline std::vector<Convergent> convergents(const ThetaParams& p, std::span<const digit_t> digits) {
    detail::check_digits(p, digits, false);
    std::vector<Convergent> out;
    out.reserve(digits.size());
    double p2 = 1.0, p1 = 0.0;  // p_{k-2}, p_{k-1}
    double q2 = 0.0, q1 = 1.0;
    int k = 0;
    for (digit_t d : digits) {
        const double a = static_cast<double>(d) * p.theta;
        const double pk = a * p1 + p2;
        const double qk = a * q1 + q2;
        out.push_back({++k, pk, qk});
        p2 = p1;
        p1 = pk;
        q2 = q1;
        q1 = qk;
    }
    return out;
}

/// [a_1 theta, ..., a_{n-1} theta, a_n theta + tail], evaluated innermost-out.
inline double cf_eval(const ThetaParams& p, std::span<const digit_t> digits, double tail) {
    detail::check_digits(p, digits, false);
    tail = detail::checked_unit(p, tail, "tail");
    double v = static_cast<double>(digits.back()) * p.theta + tail;
    for (auto it = digits.rbegin() + 1; it != digits.rend(); ++it) {
        v = static_cast<double>(*it) * p.theta + 1.0 / v;
    }
    return std::clamp(1.0 / v, 0.0, p.theta);
}

struct CylinderInterval {
    std::vector<digit_t> digits;
    double lower = 0.0;
    double upper = 0.0;

    [[nodiscard]] double length() const noexcept { return upper - lower; }
};

/// The n-th order cylinder: points whose expansion starts with `digits`.
inline CylinderInterval cylinder_interval(const ThetaParams& p, std::span<const digit_t> digits) {
    const double at_zero = cf_eval(p, digits, 0.0);
    const double at_theta = cf_eval(p, digits, p.theta);
    CylinderInterval c;
    c.digits.assign(digits.begin(), digits.end());
    c.lower = std::min(at_zero, at_theta);
    c.upper = std::max(at_zero, at_theta);
    return c;
}

}  // namespace thetaexp
