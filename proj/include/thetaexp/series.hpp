// SPDX-License-Identifier: MIT
/**
 * @file series.hpp
 * @brief Digit-series kernels: digamma tails, Hurwitz zeta, and weighted
 *        point rules for sums over inverse branches.
 *
 * Most infinite sums in this library have the form
 *
 *     sum_{i = lo}^{hi} P_i(s) f(u_i(s)),   u_i(s) = 1 / (s + i theta),
 *
 * with f smooth on [0, theta]. BranchQuadrature turns such a sum into a short
 * list of (point, weight) pairs: the first digits are taken explicitly and the
 * remaining tail is replaced by an interpolatory rule on [0, u_J(s)] whose
 * weights reproduce the exact tail moments sum_{i >= J} P_i(s) u_i(s)^k.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include <boost/math/special_functions/digamma.hpp>

#include "thetaexp/measures.hpp"

namespace thetaexp {

/// psi(b) - psi(a).
inline double digamma_diff(double a, double b) {
    if (a == b) {
        return 0.0;
    }
    return boost::math::digamma(b) - boost::math::digamma(a);
}

/// Fills out[p] = zeta(p, w) = sum_{k >= 0} (w + k)^-p for p = 2..p_max (w > 0).
inline void hurwitz_zeta_table(double w, int p_max, std::span<double> out) {
    detail::require(static_cast<int>(out.size()) > p_max, "zeta table too small");
    std::fill(out.begin(), out.end(), 0.0);
    constexpr double kShift = 40.0;
    while (w < kShift) {
        const double t = 1.0 / w;
        double tp = t * t;
        for (int p = 2; p <= p_max; ++p) {
            out[p] += tp;
            tp *= t;
        }
        w += 1.0;
    }
    // Euler-Maclaurin; c_j = B_{2j} / (2j)!.
    static constexpr std::array<double, 6> c = {
        1.0 / 12.0,        -1.0 / 720.0,     1.0 / 30240.0,
        -1.0 / 1209600.0,  1.0 / 47900160.0, -691.0 / 1307674368000.0,
    };
    const double inv = 1.0 / w;
    const double inv2 = inv * inv;
    double wp = inv2;  // w^-p
    for (int p = 2; p <= p_max; ++p) {
        double acc = w * wp / (p - 1) + 0.5 * wp;
        double term = wp * inv * p;  // (p)_1 w^{-p-1}
        for (std::size_t j = 0; j < c.size(); ++j) {
            acc += c[j] * term;
            const double k = static_cast<double>(2 * j + 1);
            term *= (p + k) * (p + k + 1.0) * inv2;
        }
        out[p] += acc;
        wp *= inv;
    }
}

struct WeightedPoint {
    double u = 0.0;
    double w = 0.0;
};

class BranchQuadrature {
public:
    /// Digits above this are dropped; their total mass is below ~1e-15.
    static constexpr double kDigitCeiling = 1e15;

    explicit BranchQuadrature(const ThetaParams& p, int explicit_count = 32)
        : theta_(p.theta), explicit_(explicit_count) {
        detail::require(explicit_count >= 8, "explicit_count must be at least 8");
        for (int j = 0; j < kClosure; ++j) {
            t_[j] = 0.5 * (1.0 - std::cos((2.0 * j + 1.0) * std::numbers::pi / (2.0 * kClosure)));
        }
        // Monomial coefficients of the Lagrange basis on t_.
        for (int j = 0; j < kClosure; ++j) {
            std::array<double, kClosure> poly{};
            poly[0] = 1.0;
            int deg = 0;
            double denom = 1.0;
            for (int l = 0; l < kClosure; ++l) {
                if (l == j) {
                    continue;
                }
                for (int d = deg + 1; d > 0; --d) {
                    poly[d] = poly[d - 1] - t_[l] * poly[d];
                }
                poly[0] = -t_[l] * poly[0];
                ++deg;
                denom *= t_[j] - t_[l];
            }
            for (int k = 0; k < kClosure; ++k) {
                lagrange_[j][k] = poly[k] / denom;
            }
        }
    }

    [[nodiscard]] double theta() const noexcept { return theta_; }

    /// Appends the rule for sum_{i=lo}^{hi} P_i(s) f(u_i(s)); hi may be +inf.
    void append(double s, double lo, double hi, std::vector<WeightedPoint>& out) const {
        if (lo > hi || lo > kDigitCeiling) {
            return;
        }
        hi = std::min(hi, kDigitCeiling);
        const double span = hi - lo + 1.0;
        const double n_explicit = std::min(span, static_cast<double>(explicit_));
        for (double i = lo; i < lo + n_explicit; i += 1.0) {
            out.push_back({1.0 / (s + i * theta_), detail::p_i(theta_, i, s)});
        }
        if (n_explicit < span) {
            append_tail(s, lo + n_explicit, 1.0, out);
            if (hi < kDigitCeiling) {
                append_tail(s, hi + 1.0, -1.0, out);
            }
        }
    }

    /// Total weight the rule assigns to sum_{i=lo}^{hi} P_i(s).
    [[nodiscard]] double mass(double s, double lo, double hi) const noexcept {
        if (lo > hi) {
            return 0.0;
        }
        const double c = (s * theta_ + 1.0) / theta_;
        const double head = c / (s + lo * theta_);
        return std::isinf(hi) ? head : head - c / (s + (hi + 1.0) * theta_);
    }

private:
    static constexpr int kClosure = 8;
    static constexpr int kTerms = 14;

    void append_tail(double s, double first, double sign, std::vector<WeightedPoint>& out) const {
        const double wj = first + s / theta_;
        const double uj = 1.0 / (theta_ * wj);
        const double pref = (s * theta_ + 1.0) / (theta_ * theta_);
        std::array<double, kClosure + kTerms + 2> zeta{};
        hurwitz_zeta_table(wj, kClosure + kTerms + 1, zeta);
        std::array<double, kClosure> mom{};
        mom[0] = pref / wj;
        double wk = 1.0;
        for (int k = 1; k < kClosure; ++k) {
            wk *= wj;
            double acc = 0.0;
            for (int r = kTerms - 1; r >= 0; --r) {
                acc = zeta[k + 2 + r] - acc;
            }
            mom[k] = pref * wk * acc;
        }
        for (int j = 0; j < kClosure; ++j) {
            double w = 0.0;
            for (int k = 0; k < kClosure; ++k) {
                w += lagrange_[j][k] * mom[k];
            }
            out.push_back({uj * t_[j], sign * w});
        }
    }

    double theta_;
    int explicit_;
    std::array<double, kClosure> t_{};
    std::array<std::array<double, kClosure>, kClosure> lagrange_{};
};

}  // namespace thetaexp
