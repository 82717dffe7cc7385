// SPDX-License-Identifier: MIT
/**
 * @file chain_operator.hpp
 * @brief Joint law of (T^n, s_n) by threshold-chain cylinder decomposition.
 *
 * Under gamma_{theta,a} the digit string i_1..i_n has probability
 * P_{i_1..i_n}(a), and given the digits T^n is distributed as gamma_{theta,s_n}.
 * The event {s_n <= y} depends on the last digit through a single threshold:
 * every digit in a contiguous range satisfies it outright, at most one digit
 * leaves it undecided, and for that digit the event becomes a threshold on
 * s_{n-1}. Repeating this down to the seed splits the event into at most n+1
 * pieces. Each piece is "free digits 1..L-1, digit L in a range, digits
 * L+1..n fixed", so its probability is (U^{L-1} Phi)(a) for an explicit
 * function Phi, where (U f)(s) = sum_i P_i(s) f(u_i(s)).
 *
 * U is discretized by collocation at Chebyshev-Lobatto nodes on [0, theta];
 * the functions it acts on are analytic on a neighbourhood of the interval,
 * so the discretization error decays geometrically in the node count.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "thetaexp/measures.hpp"
#include "thetaexp/series.hpp"

namespace thetaexp {

/// Barycentric Lagrange interpolation at Chebyshev-Lobatto nodes on [0, theta].
class ChebyshevGrid {
public:
    ChebyshevGrid(double theta, int n) {
        detail::require(n >= 4, "need at least 4 Chebyshev nodes");
        nodes_.resize(n);
        bary_.resize(n);
        for (int j = 0; j < n; ++j) {
            nodes_[j] = 0.5 * theta * (1.0 - std::cos(std::numbers::pi * j / (n - 1)));
            bary_[j] = (j % 2 == 0 ? 1.0 : -1.0) * ((j == 0 || j == n - 1) ? 0.5 : 1.0);
        }
    }

    [[nodiscard]] int size() const noexcept { return static_cast<int>(nodes_.size()); }
    [[nodiscard]] const std::vector<double>& nodes() const noexcept { return nodes_; }

    /// Adds weight * l_j(u) to out[j] for every basis polynomial l_j.
    void accumulate_basis(double u, double weight, std::span<double> out) const {
        const int n = size();
        double denom = 0.0;
        for (int j = 0; j < n; ++j) {
            const double d = u - nodes_[j];
            if (d == 0.0) {
                out[j] += weight;
                return;
            }
            denom += bary_[j] / d;
        }
        const double scale = weight / denom;
        for (int j = 0; j < n; ++j) {
            out[j] += scale * bary_[j] / (u - nodes_[j]);
        }
    }

    [[nodiscard]] double interpolate(std::span<const double> values, double u) const {
        const int n = size();
        double num = 0.0, denom = 0.0;
        for (int j = 0; j < n; ++j) {
            const double d = u - nodes_[j];
            if (d == 0.0) {
                return values[j];
            }
            num += bary_[j] * values[j] / d;
            denom += bary_[j] / d;
        }
        return num / denom;
    }

private:
    std::vector<double> nodes_;
    std::vector<double> bary_;
};

/// Threshold on a chain value: sigma <= t (at_most) or sigma >= t (at_least).
struct Threshold {
    enum Kind { at_most, at_least } kind = at_most;
    double t = 0.0;

    [[nodiscard]] bool holds(double sigma) const noexcept {
        return kind == at_most ? sigma <= t : sigma >= t;
    }
};

/// One piece of the decomposition: digit `level` ranges over [lo, hi] and
/// digits level+1..n are fixed (listed in application order).
struct ChainTerm {
    int level = 0;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> fixed;
};

struct ThresholdChain {
    std::vector<ChainTerm> terms;
    bool reaches_seed = false;       ///< all n digits fixed; the seed decides
    std::vector<double> seed_fixed;  ///< digits 1..n when reaches_seed
    Threshold seed_condition;
};

namespace detail {

struct LevelSplit {
    double lo = 1.0;
    double hi = 0.0;  // empty when lo > hi
    bool undecided = false;
    double digit = 0.0;
    Threshold next;
};

inline LevelSplit split_level(double theta, double m, const Threshold& c) {
    LevelSplit s;
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (c.kind == Threshold::at_most) {
        if (c.t >= theta) {
            s.lo = m;
            s.hi = inf;
            return s;
        }
        if (c.t <= 0.0) {
            return s;
        }
        const double first = std::ceil(1.0 / (c.t * theta));
        s.lo = std::max(first, m);
        s.hi = inf;
        if (first - 1.0 >= m && first - 1.0 <= BranchQuadrature::kDigitCeiling) {
            s.undecided = true;
            s.digit = first - 1.0;
            s.next = {Threshold::at_least, 1.0 / c.t - s.digit * theta};
        }
        return s;
    }
    if (c.t <= 0.0) {
        s.lo = m;
        s.hi = inf;
        return s;
    }
    if (c.t > theta) {
        return s;
    }
    const double fl = std::max(std::floor(1.0 / (c.t * theta)), m);
    s.lo = m;
    s.hi = fl - 1.0;
    if (fl <= BranchQuadrature::kDigitCeiling) {
        s.undecided = true;
        s.digit = fl;
        s.next = {Threshold::at_most, 1.0 / c.t - s.digit * theta};
    }
    return s;
}

}  // namespace detail

/// Splits {s_n <= y} into ranges of one digit with the later digits fixed.
inline ThresholdChain decompose_threshold(const ThetaParams& p, int n, double y) {
    detail::require(n >= 0, "n must be nonnegative");
    ThresholdChain chain;
    Threshold cond{Threshold::at_most, y};
    std::vector<double> fixed;  // application order: level L+1 first
    for (int level = n; level >= 1; --level) {
        const auto split = detail::split_level(p.theta, static_cast<double>(p.m), cond);
        if (split.lo <= split.hi) {
            chain.terms.push_back({level, split.lo, split.hi, fixed});
        }
        if (!split.undecided) {
            return chain;
        }
        fixed.insert(fixed.begin(), split.digit);
        cond = split.next;
    }
    chain.reaches_seed = true;
    chain.seed_fixed = std::move(fixed);
    chain.seed_condition = cond;
    return chain;
}

struct ChainOptions {
    int nodes = 32;            ///< Chebyshev collocation nodes
    int explicit_digits = 32;  ///< digits summed term by term before the tail rule
};

/// Collocation discretization of (U f)(s) = sum_{i >= m} P_i(s) f(u_i(s)).
class ChainOperator {
public:
    explicit ChainOperator(const ThetaParams& p, const ChainOptions& opt = {})
        : params_(p), grid_(p.theta, opt.nodes), quad_(p, opt.explicit_digits) {
        const int n = grid_.size();
        matrix_.assign(static_cast<std::size_t>(n) * n, 0.0);
        for (int k = 0; k < n; ++k) {
            row(grid_.nodes()[k], std::span<double>(matrix_).subspan(k * n, n));
        }
        error_ = measure_error();
    }

    [[nodiscard]] const ThetaParams& params() const noexcept { return params_; }
    [[nodiscard]] const ChebyshevGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] const BranchQuadrature& quadrature() const noexcept { return quad_; }

    /// Weights w with (U f)(s) ~ sum_j w_j f(node_j).
    void row(double s, std::span<double> out) const {
        std::fill(out.begin(), out.end(), 0.0);
        for_each_point(s, static_cast<double>(params_.m), std::numeric_limits<double>::infinity(),
                    [&](double u, double w) { grid_.accumulate_basis(u, w, out); });
    }

    /// rows[j] = row(a) M^j for j = 0..depth-1: (U^{j+1} f)(a) ~ rows[j] . f(nodes).
    [[nodiscard]] std::vector<std::vector<double>> propagated_rows(double a, int depth) const {
        const int n = grid_.size();
        std::vector<std::vector<double>> rows;
        if (depth <= 0) {
            return rows;
        }
        rows.emplace_back(n);
        row(a, rows.back());
        for (int j = 1; j < depth; ++j) {
            std::vector<double> next(n, 0.0);
            const auto& prev = rows.back();
            for (int k = 0; k < n; ++k) {
                const double c = prev[k];
                const double* mk = &matrix_[static_cast<std::size_t>(k) * n];
                for (int l = 0; l < n; ++l) {
                    next[l] += c * mk[l];
                }
            }
            rows.push_back(std::move(next));
        }
        return rows;
    }

    /// Largest one-step error of the discrete U on the kernels s -> gamma_s([0, x]),
    /// measured against their digamma closed form.
    [[nodiscard]] double one_step_error() const noexcept { return error_; }

    /// Error bound for n applications, with a floor for summation rounding.
    [[nodiscard]] double error_bound(int n) const noexcept {
        return static_cast<double>(n + 1) * std::max(error_, 1e-14);
    }

private:
    template <class F>
    void for_each_point(double s, double lo, double hi, F&& f) const {
        thread_local std::vector<WeightedPoint> pts;
        pts.clear();
        quad_.append(s, lo, hi, pts);
        for (const auto& q : pts) {
            f(q.u, q.w);
        }
    }

    double measure_error() const {
        const double th = params_.theta;
        const int n = grid_.size();
        std::vector<double> r(n), f(n);
        double worst = 0.0;
        for (double xf : {0.125, 0.5, 1.0}) {
            const double x = xf * th;
            for (int k = 0; k < n; ++k) {
                f[k] = detail::gamma_a_kernel(th, grid_.nodes()[k], x);
            }
            for (int j = 0; j <= 32; ++j) {
                const double s = th * j / 32.0;
                row(s, r);
                double approx = 0.0;
                for (int k = 0; k < n; ++k) {
                    approx += r[k] * f[k];
                }
                const double md = static_cast<double>(params_.m);
                const double exact =
                    (s * th + 1.0) / (th * th) * digamma_diff(md + s / th, md + (s + x) / th);
                worst = std::max(worst, std::abs(approx - exact));
            }
        }
        return worst;
    }

    ThetaParams params_;
    ChebyshevGrid grid_;
    BranchQuadrature quad_;
    std::vector<double> matrix_;
    double error_ = 0.0;
};

/// gamma_{theta,a}(T^n <= x, s_n <= y) as a function of x for fixed (n, a, y).
///
/// With `uniform_seed` the threshold at the bottom of the chain is applied to
/// a seed v uniform on [0, theta] instead of to a, while probabilities and
/// the law of T^n use a = 0; this is lambda(T^n u <= x, s_n(v) <= y), the
/// two-dimensional distribution function of the natural extension.
class JointLaw {
public:
    JointLaw(const ChainOperator& op, int n, double a, double y, bool uniform_seed = false)
        : op_(&op), a_(uniform_seed ? 0.0 : a) {
        const auto& p = op.params();
        // Atoms of s_n lying exactly on y are counted (right-continuous CDF).
        chain_ = decompose_threshold(p, n, y + 1e-14 * p.theta);
        rows_ = op.propagated_rows(a_, n - 1);
        const auto& nodes = op.grid().nodes();
        for (const auto& term : chain_.terms) {
            Piece piece;
            if (term.level == 1) {
                piece.offsets.push_back(0);
                op.quadrature().append(a_, term.lo, term.hi, piece.points);
                piece.offsets.push_back(piece.points.size());
            } else {
                piece.offsets.push_back(0);
                for (double s : nodes) {
                    op.quadrature().append(s, term.lo, term.hi, piece.points);
                    piece.offsets.push_back(piece.points.size());
                }
            }
            pieces_.push_back(std::move(piece));
        }
        if (chain_.reaches_seed) {
            const auto& c = chain_.seed_condition;
            if (uniform_seed) {
                const double t = std::clamp(c.t, 0.0, p.theta);
                seed_weight_ = (c.kind == Threshold::at_most ? t : p.theta - t) / p.theta;
            } else {
                seed_weight_ = c.holds(a_) ? 1.0 : 0.0;
            }
        }
    }

    [[nodiscard]] const ThresholdChain& chain() const noexcept { return chain_; }

    double operator()(double x) const {
        const double th = op_->params().theta;
        double total = 0.0;
        std::vector<double> phi;
        for (std::size_t t = 0; t < pieces_.size(); ++t) {
            const auto& term = chain_.terms[t];
            const auto& piece = pieces_[t];
            auto phi_at = [&](std::size_t k) {
                double acc = 0.0;
                for (std::size_t q = piece.offsets[k]; q < piece.offsets[k + 1]; ++q) {
                    acc += piece.points[q].w * psi(term.fixed, piece.points[q].u, x, th);
                }
                return acc;
            };
            if (term.level == 1) {
                total += phi_at(0);
                continue;
            }
            const auto& r = rows_[term.level - 2];
            double acc = 0.0;
            for (std::size_t k = 0; k + 1 < piece.offsets.size(); ++k) {
                acc += r[k] * phi_at(k);
            }
            total += acc;
        }
        if (chain_.reaches_seed && seed_weight_ > 0.0) {
            total += seed_weight_ * psi(chain_.seed_fixed, a_, x, th);
        }
        return total;
    }

private:
    struct Piece {
        std::vector<WeightedPoint> points;
        std::vector<std::size_t> offsets;
    };

    // Probability of the fixed digits from state sigma, times gamma_{s_n}([0, x]).
    static double psi(const std::vector<double>& fixed, double sigma, double x, double th) {
        double prob = 1.0;
        for (double d : fixed) {
            prob *= detail::p_i(th, d, sigma);
            sigma = 1.0 / (d * th + sigma);
        }
        return prob * detail::gamma_a_kernel(th, sigma, x);
    }

    const ChainOperator* op_;
    double a_;
    ThresholdChain chain_;
    std::vector<std::vector<double>> rows_;
    std::vector<Piece> pieces_;
    double seed_weight_ = 0.0;
};

}  // namespace thetaexp
