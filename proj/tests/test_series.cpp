// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "thetaexp/series.hpp"

using namespace thetaexp;

TEST(DigammaDiff, Recurrence) {
    EXPECT_NEAR(digamma_diff(2.0, 3.0), 0.5, 1e-15);
    EXPECT_NEAR(digamma_diff(1.0, 4.0), 1.0 + 0.5 + 1.0 / 3.0, 1e-15);
    EXPECT_EQ(digamma_diff(7.5, 7.5), 0.0);
}

TEST(HurwitzZeta, RiemannValues) {
    std::array<double, 7> z{};
    hurwitz_zeta_table(1.0, 6, z);
    const double pi2 = std::numbers::pi * std::numbers::pi;
    EXPECT_NEAR(z[2], pi2 / 6.0, 1e-14);
    EXPECT_NEAR(z[3], 1.2020569031595942, 1e-14);
    EXPECT_NEAR(z[4], pi2 * pi2 / 90.0, 1e-14);
    EXPECT_NEAR(z[6], pi2 * pi2 * pi2 / 945.0, 1e-14);
}

TEST(HurwitzZeta, ShiftIdentity) {
    std::array<double, 12> a{}, b{};
    for (double w : {0.3, 2.7, 55.0, 1234.5}) {
        hurwitz_zeta_table(w, 11, a);
        hurwitz_zeta_table(w + 1.0, 11, b);
        for (int p = 2; p <= 11; ++p) {
            EXPECT_NEAR(a[p] - b[p], std::pow(w, -p), 1e-14 * a[p]) << "w=" << w << " p=" << p;
        }
    }
}

TEST(HurwitzZeta, RejectsShortTable) {
    std::array<double, 3> z{};
    EXPECT_THROW(hurwitz_zeta_table(1.0, 5, z), invalid_parameter);
}

namespace {

double rule_sum(const std::vector<WeightedPoint>& pts, auto&& f) {
    double acc = 0.0;
    for (const auto& q : pts) {
        acc += q.w * f(q.u);
    }
    return acc;
}

}  // namespace

TEST(BranchQuadrature, WeightsSumToTailMass) {
    for (std::int64_t m : {1, 2, 3, 10}) {
        const auto p = make_params(m);
        BranchQuadrature quad(p);
        const double inf = std::numeric_limits<double>::infinity();
        for (double s : {0.0, 0.5 * p.theta, p.theta}) {
            std::vector<WeightedPoint> pts;
            const double md = static_cast<double>(m);
            quad.append(s, md, inf, pts);
            EXPECT_NEAR(rule_sum(pts, [](double) { return 1.0; }), 1.0, 5e-13);
            EXPECT_NEAR(quad.mass(s, md, inf), 1.0, 1e-14);
            pts.clear();
            quad.append(s, md + 5.0, md + 500.0, pts);
            EXPECT_NEAR(rule_sum(pts, [](double) { return 1.0; }), quad.mass(s, md + 5.0, md + 500.0), 5e-13);
        }
    }
}

TEST(BranchQuadrature, KernelAgainstDigamma) {
    const auto p = make_params(2);
    const double th = p.theta;
    BranchQuadrature quad(p);
    for (double s : {0.0, 0.3, th}) {
        for (double x : {0.1, 0.5, th}) {
            std::vector<WeightedPoint> pts;
            quad.append(s, 2.0, std::numeric_limits<double>::infinity(), pts);
            const double got = rule_sum(pts, [&](double u) { return detail::gamma_a_kernel(th, u, x); });
            const double want = (s * th + 1.0) / (th * th) * digamma_diff(2.0 + s / th, 2.0 + (s + x) / th);
            EXPECT_NEAR(got, want, 1e-13);
        }
    }
}

TEST(BranchQuadrature, FiniteRangeMatchesDirectSum) {
    const auto p = make_params(3);
    const double th = p.theta;
    BranchQuadrature quad(p, 8);
    std::vector<WeightedPoint> pts;
    quad.append(0.2, 10.0, 2000.0, pts);
    double want = 0.0;
    for (int i = 10; i <= 2000; ++i) {
        const double u = 1.0 / (0.2 + i * th);
        want += detail::p_i(th, i, 0.2) * std::cos(3.0 * u);
    }
    EXPECT_NEAR(rule_sum(pts, [](double u) { return std::cos(3.0 * u); }), want, 1e-13);
}

TEST(BranchQuadrature, EmptyRange) {
    BranchQuadrature quad(make_params(2));
    std::vector<WeightedPoint> pts;
    quad.append(0.1, 5.0, 4.0, pts);
    EXPECT_TRUE(pts.empty());
    EXPECT_EQ(quad.mass(0.1, 5.0, 4.0), 0.0);
    EXPECT_THROW(BranchQuadrature(make_params(2), 4), invalid_parameter);
}
