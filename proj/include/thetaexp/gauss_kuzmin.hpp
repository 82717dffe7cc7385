// SPDX-License-Identifier: MIT
/**
 * @file gauss_kuzmin.hpp
 * @brief Gauss-Kuzmin problem for T: iteration of distribution functions,
 *        the error term e_{n,a}, its explicit bounds, and the rate table.
 *
 * F_n(x) = lambda_theta(T^n <= x) obeys
 *
 *     F_{n+1}(x) = sum_{i >= m} [F_n(1/(i theta)) - F_n(1/(i theta + x))]
 *
 * and tends to the invariant distribution ln(1 + theta x) / ln(1 + theta^2).
 * The error term
 *
 *     e_{n,a}(x, y) = gamma_{theta,a}(T^n <= x, s_{n,a} <= y) - ln(1 + x y) / ln(1 + theta^2)
 *
 * satisfies (1/2) P_{m(n)}(theta) <= sup_{x,y} |e_{n,a}| <= (m+1)^-n, where
 * P_{m(n)} is the probability of n consecutive digits equal to m.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "thetaexp/chain_operator.hpp"
#include "thetaexp/grid_function.hpp"
#include "thetaexp/measures.hpp"
#include "thetaexp/series.hpp"

namespace thetaexp {

struct Gk1dStep {
    GridFunction F;
    double tail_bound = 0.0;  ///< bound on the part of the series not summed exactly
};

/// Smallest cutoff for which every point 1/(i theta), i > i_max, lies in the
/// first grid cell.
inline digit_t gk1d_default_i_max(const ThetaParams& p, std::size_t n_cells) {
    return static_cast<digit_t>(n_cells) * p.m;
}

/// One step of the recursion on the piecewise-linear representative of F.
/// Digits i <= i_max are summed directly. Beyond i_max the arguments lie near
/// 0, where F is linear with the slope of its first cell, and that tail sums to
/// slope/theta * (psi(i_max + 1 + x/theta) - psi(i_max + 1)). The tail is exact
/// for the representative once i_max >= gk1d_default_i_max.
inline Gk1dStep gk1d_step(const ThetaParams& p, const GridFunction& F, digit_t i_max) {
    detail::require(i_max >= p.m, "i_max must be at least m");
    const double th = p.theta;
    const auto n = F.n_cells();
    const double slope = (F[1] - F[0]) / F.spacing();
    const double next = static_cast<double>(i_max) + 1.0;
    std::vector<double> out(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const double x = F.node(k);
        double acc = 0.0;
        for (digit_t i = p.m; i <= i_max; ++i) {
            const double it = static_cast<double>(i) * th;
            acc += F(1.0 / it) - F(1.0 / (it + x));
        }
        acc += slope / th * digamma_diff(next, next + x / th);
        out[k] = acc;
    }
    Gk1dStep step{GridFunction(th, std::move(out)), 0.0};
    if (i_max < gk1d_default_i_max(p, n)) {
        double lip = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            lip = std::max(lip, std::abs(F[k + 1] - F[k]) / F.spacing());
        }
        step.tail_bound = lip * th / (th * th * static_cast<double>(i_max));
    }
    return step;
}

/// Partial sum sum_{i=m}^{i_max} [F(1/(i theta)) - F(1/(i theta + x))] for a
/// callable F, without any tail correction.
template <class F>
double gk1d_series(const ThetaParams& p, F&& f, double x, digit_t i_max) {
    detail::require(i_max >= p.m, "i_max must be at least m");
    x = detail::checked_unit(p, x);
    const double th = p.theta;
    double acc = 0.0;
    for (digit_t i = p.m; i <= i_max; ++i) {
        const double it = static_cast<double>(i) * th;
        acc += f(1.0 / it) - f(1.0 / (it + x));
    }
    return acc;
}

/// Bound on the omitted tail of gk1d_series: sup|F'| x / (theta^2 i_max).
inline double gk1d_tail_bound(const ThetaParams& p, double lipschitz, double x, digit_t i_max) {
    return lipschitz * x / (p.theta * p.theta * static_cast<double>(i_max));
}

struct Kuzmin1DRun {
    std::vector<GridFunction> F;     ///< F_0..F_n on the fine grid
    std::vector<double> resolution;  ///< sup over shared nodes of |fine - half-resolution run|
};

/// Iterates gk1d_step from F_0 = f0 on n_cells and on n_cells/2 cells. The
/// difference of the two runs is three times the leading O(h^2) error of the
/// coarse one, so it bounds the error of the fine run with a safety factor.
template <class F0>
Kuzmin1DRun kuzmin_1d(const ThetaParams& p, F0&& f0, int n, std::size_t n_cells) {
    detail::require(n >= 0, "n must be nonnegative");
    detail::require(n_cells >= 4 && n_cells % 2 == 0, "n_cells must be even and at least 4");
    Kuzmin1DRun run;
    GridFunction fine = GridFunction::sample(p, n_cells, f0);
    GridFunction coarse = GridFunction::sample(p, n_cells / 2, f0);
    auto record = [&] {
        double d = 0.0;
        for (std::size_t k = 0; k <= n_cells / 2; ++k) {
            d = std::max(d, std::abs(fine[2 * k] - coarse[k]));
        }
        run.F.push_back(fine);
        run.resolution.push_back(d);
    };
    record();
    for (int j = 0; j < n; ++j) {
        fine = gk1d_step(p, fine, gk1d_default_i_max(p, n_cells)).F;
        coarse = gk1d_step(p, coarse, gk1d_default_i_max(p, n_cells / 2)).F;
        record();
    }
    return run;
}

struct ChainValue {
    double value = 0.0;
    double truncation_bound = 0.0;
};

/// F_n(x) = lambda_theta(T^n <= x) by the cylinder decomposition.
inline ChainValue fn_oracle(const ThetaParams& p, int n, double x, const ChainOptions& opt = {}) {
    detail::require(n >= 0, "n must be nonnegative");
    x = detail::checked_unit(p, x);
    ChainOperator op(p, opt);
    JointLaw law(op, n, 0.0, p.theta);
    return {law(x), op.error_bound(n)};
}

/// gamma_{theta,a}(T^n <= x, s_{n,a} <= y).
inline ChainValue joint_dist(const ThetaParams& p, double a, int n, double x, double y,
                             const ChainOptions& opt = {}) {
    detail::require(n >= 0, "n must be nonnegative");
    a = detail::checked_unit(p, a, "a");
    x = detail::checked_unit(p, x);
    y = detail::checked_unit(p, y, "y");
    ChainOperator op(p, opt);
    JointLaw law(op, n, a, y);
    return {law(x), op.error_bound(n)};
}

struct DecayReport {
    std::vector<int> n;
    std::vector<double> deviation;  ///< sup over grid nodes of |F_n - gamma_cdf|
    std::vector<double> resolution;
    double fitted_rate = 0.0;       ///< exp of the least-squares slope of ln(deviation)
};

inline DecayReport decay_estimate(const ThetaParams& p, int n_max, std::size_t n_cells) {
    detail::require(n_max >= 2, "n_max must be at least 2");
    const double th = p.theta;
    const auto run = kuzmin_1d(p, [th](double x) { return x / th; }, n_max, n_cells);
    DecayReport r;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = 1; k <= n_max; ++k) {
        const auto& F = run.F[k];
        double dev = 0.0;
        for (std::size_t j = 0; j <= F.n_cells(); ++j) {
            dev = std::max(dev, std::abs(F[j] - gamma_cdf(p, F.node(j))));
        }
        r.n.push_back(k);
        r.deviation.push_back(dev);
        r.resolution.push_back(run.resolution[k]);
        const double ly = std::log(dev);
        sx += k;
        sy += ly;
        sxx += static_cast<double>(k) * k;
        sxy += k * ly;
    }
    const double cnt = n_max;
    r.fitted_rate = std::exp((cnt * sxy - sx * sy) / (cnt * sxx - sx * sx));
    return r;
}

struct ErrorSurface {
    int n = 0;
    double a = 0.0;
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<std::vector<double>> values;  ///< values[i][j] = e_{n,a}(xs[i], ys[j])
    double sup_abs = 0.0;
    double argmax_x = 0.0;
    double argmax_y = 0.0;
    double truncation_bound = 0.0;
};

/// e_{n,a} on a uniform grid (grid points per axis), plus any extra y values.
inline ErrorSurface error_surface(const ThetaParams& p, double a, int n, std::size_t grid,
                                  const std::vector<double>& extra_y = {}, const ChainOptions& opt = {}) {
    detail::require(n >= 0, "n must be nonnegative");
    detail::require(grid >= 2, "grid must be at least 2");
    a = detail::checked_unit(p, a, "a");
    const double th = p.theta;
    ErrorSurface s;
    s.n = n;
    s.a = a;
    for (std::size_t i = 0; i < grid; ++i) {
        const double v = i + 1 == grid ? th : th * static_cast<double>(i) / static_cast<double>(grid - 1);
        s.xs.push_back(v);
        s.ys.push_back(v);
    }
    for (double y : extra_y) {
        s.ys.push_back(detail::checked_unit(p, y, "y"));
    }
    std::sort(s.ys.begin(), s.ys.end());
    ChainOperator op(p, opt);
    s.truncation_bound = op.error_bound(n);
    s.values.assign(s.xs.size(), std::vector<double>(s.ys.size()));
    for (std::size_t j = 0; j < s.ys.size(); ++j) {
        const double y = s.ys[j];
        JointLaw law(op, n, a, y);
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            const double x = s.xs[i];
            const double e = law(x) - std::log1p(x * y) / p.log_norm;
            s.values[i][j] = e;
            if (std::abs(e) > s.sup_abs) {
                s.sup_abs = std::abs(e);
                s.argmax_x = x;
                s.argmax_y = y;
            }
        }
    }
    return s;
}

/// P_{m(n)}(a): probability under gamma_{theta,a} that the first n digits all equal m.
inline double p_mn(const ThetaParams& p, int n, double a) {
    detail::require(n >= 1, "n must be at least 1");
    const std::vector<digit_t> digits(static_cast<std::size_t>(n), p.m);
    return transition_product(p, digits, a);
}

/// q_k for the all-m digit string: q_k = m theta q_{k-1} + q_{k-2}, q_{-1} = 0, q_0 = 1.
inline double q_recurrence(const ThetaParams& p, int n) {
    detail::require(n >= -1, "n must be at least -1");
    if (n == -1) {
        return 0.0;
    }
    double q2 = 0.0, q1 = 1.0;
    const double c = static_cast<double>(p.m) * p.theta;
    for (int k = 1; k <= n; ++k) {
        const double q = c * q1 + q2;
        q2 = q1;
        q1 = q;
    }
    return q1;
}

/// theta / sqrt(1 + 4 theta^2) [((1 + r)/(2 theta))^{n+1} - ((1 - r)/(2 theta))^{n+1}], r = sqrt(1 + 4 theta^2).
inline double q_closed_form(const ThetaParams& p, int n) {
    detail::require(n >= -1, "n must be at least -1");
    const double th = p.theta;
    const double r = std::sqrt(1.0 + 4.0 * th * th);
    const double up = (1.0 + r) / (2.0 * th);
    const double down = (1.0 - r) / (2.0 * th);
    return th / r * (std::pow(up, n + 1) - std::pow(down, n + 1));
}

struct PmnComparison {
    double closed = 0.0;   ///< (m+1) / (q_{n+1} q_{n+2})
    double product = 0.0;  ///< p_mn(n, theta)
    double ratio = 0.0;    ///< closed / product
};

inline PmnComparison p_mn_closed(const ThetaParams& p, int n) {
    detail::require(n >= 1, "n must be at least 1");
    PmnComparison c;
    c.closed = static_cast<double>(p.m + 1) / (q_recurrence(p, n + 1) * q_recurrence(p, n + 2));
    c.product = p_mn(p, n, p.theta);
    c.ratio = c.closed / c.product;
    return c;
}

struct BoundsRow {
    std::int64_t m = 1;
    double theta = 1.0;
    double lower_limit = 0.0;  ///< 2 theta^2 / (1 + 2 theta^2 + sqrt(1 + 4 theta^2))
    double upper_limit = 0.0;  ///< 1 / (m + 1)
};

inline BoundsRow rate_limits(const ThetaParams& p) {
    const double t2 = p.theta * p.theta;
    return {p.m, p.theta, 2.0 * t2 / (1.0 + 2.0 * t2 + std::sqrt(1.0 + 4.0 * t2)),
            1.0 / static_cast<double>(p.m + 1)};
}

/// (P_{m(n)}(theta) / 2)^{1/n}, which tends to lower_limit.
inline double empirical_lower_rate(const ThetaParams& p, int n) {
    return std::pow(0.5 * p_mn(p, n, p.theta), 1.0 / n);
}

inline std::vector<BoundsRow> bounds_table(const std::vector<std::int64_t>& ms) {
    std::vector<BoundsRow> rows;
    rows.reserve(ms.size());
    for (auto m : ms) {
        rows.push_back(rate_limits(make_params(m)));
    }
    return rows;
}

struct SandwichEntry {
    double a = 0.0;
    double sup_abs = 0.0;
    double argmax_x = 0.0;
    double argmax_y = 0.0;
    bool pass = false;
};

struct SandwichReport {
    std::int64_t m = 1;
    int n = 1;
    std::size_t grid = 0;
    double lower = 0.0;  ///< P_{m(n)}(theta) / 2
    double upper = 0.0;  ///< (m+1)^-n
    double sup_error = 0.0;
    double truncation_bound = 0.0;
    double grid_allowance = 0.0;
    double slack = 0.0;
    std::vector<SandwichEntry> entries;
    bool pass = false;
};

/// Checks lower - slack <= sup |e_{n,a}| <= upper + slack for every a.
///
/// Besides the uniform grid, y is sampled just below and just above the atom
/// of s_{n,a} produced by the all-m digit string (at x = theta), where the
/// joint distribution jumps by P_{m(n)}(a) >= P_{m(n)}(theta). The offset is
/// 1e-12 relative, so the limit term moves by at most 1e-12 theta^2 / ln(1 + theta^2)
/// there; that is the grid allowance.
inline SandwichReport sandwich_check(const ThetaParams& p, int n, const std::vector<double>& a_list,
                                     std::size_t grid, const ChainOptions& opt = {}) {
    detail::require(n >= 1, "n must be at least 1");
    detail::require(!a_list.empty(), "a_list must be nonempty");
    constexpr double kOffset = 1e-12;
    SandwichReport r;
    r.m = p.m;
    r.n = n;
    r.grid = grid;
    r.lower = 0.5 * p_mn(p, n, p.theta);
    r.upper = std::pow(static_cast<double>(p.m + 1), -n);
    r.grid_allowance = kOffset * p.theta * p.theta / p.log_norm;
    r.pass = true;
    for (double a : a_list) {
        a = detail::checked_unit(p, a, "a");
        double s = a;
        for (int k = 0; k < n; ++k) {
            s = 1.0 / (static_cast<double>(p.m) * p.theta + s);
        }
        const std::vector<double> extra{s * (1.0 - kOffset), std::min(p.theta, s * (1.0 + kOffset))};
        const auto surf = error_surface(p, a, n, grid, extra, opt);
        r.truncation_bound = std::max(r.truncation_bound, surf.truncation_bound);
        r.entries.push_back({a, surf.sup_abs, surf.argmax_x, surf.argmax_y, false});
        r.sup_error = std::max(r.sup_error, surf.sup_abs);
    }
    r.slack = r.truncation_bound + r.grid_allowance;
    for (auto& e : r.entries) {
        e.pass = e.sup_abs >= r.lower - r.slack && e.sup_abs <= r.upper + r.slack;
        r.pass = r.pass && e.pass;
    }
    return r;
}

}  // namespace thetaexp
