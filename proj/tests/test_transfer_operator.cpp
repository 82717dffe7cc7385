// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "thetaexp/measures.hpp"
#include "thetaexp/transfer_operator.hpp"

using namespace thetaexp;

namespace {

const auto P2 = make_params(2);
constexpr std::size_t kCells = 4096;
constexpr digit_t kIMax = 10000;

GridFunction identity(const ThetaParams& p, std::size_t cells = kCells) {
    return GridFunction::sample(p, cells, [](double x) { return x; });
}

}  // namespace

TEST(GridFunction, Basics) {
    const auto f = identity(P2, 8);
    EXPECT_EQ(f.n_cells(), 8u);
    EXPECT_NEAR(f.spacing(), P2.theta / 8.0, 1e-16);
    EXPECT_NEAR(f(0.123), 0.123, 1e-15);
    EXPECT_NEAR(f(-1.0), 0.0, 0.0);
    EXPECT_NEAR(f(5.0), P2.theta, 1e-15);
    EXPECT_THROW(GridFunction(1.0, {0.0}), invalid_parameter);
    EXPECT_THROW(GridFunction(1.0, {0.0, std::nan("")}), invalid_parameter);
}

TEST(ApplyU, ConstantIsFixed) {
    const auto one = GridFunction::sample(P2, 256, [](double) { return 1.0; });
    const auto u = apply_U(P2, one, 500);
    for (double v : u.values()) {
        EXPECT_NEAR(v, 1.0, 1e-14);
    }
}

// 2 sqrt2 (pi^2/6 - 3/2), 30 digits. The lumped tail costs O(1/i_max^2).
TEST(ApplyU, IdentityAtZero) {
    const auto u = apply_U(P2, identity(P2), kIMax);
    EXPECT_NEAR(u[0], 0.409935445973301209699974451484, 5e-8);
}

TEST(ApplyU, VariationOfIdentityImage) {
    const auto u = apply_U(P2, identity(P2), kIMax);
    EXPECT_LE(variation(u), P2.theta / 3.0);
}

TEST(ApplyU, RejectsSmallCutoff) {
    EXPECT_THROW(apply_U(P2, identity(P2, 8), 1), invalid_parameter);
}

TEST(UInfinity, ConstantAndIdentity) {
    const auto one = GridFunction::sample(P2, 64, [](double) { return 1.0; });
    EXPECT_NEAR(u_infinity(P2, one), 1.0, 1e-15);
    // mpmath quadrature, 30 digits; exact for a linear function.
    EXPECT_NEAR(u_infinity(P2, identity(P2, 64)), 0.329726340337140976285321629971, 1e-14);
    const double L = std::log(1.5);
    EXPECT_NEAR(u_infinity(P2, identity(P2, 64)), (P2.theta - L / P2.theta) / L, 1e-14);
}

TEST(UInfinity, IndicatorMatchesGammaCdf) {
    const std::size_t k = 2896;  // node closest to 0.5 on 4096 cells
    const auto f = GridFunction::sample(P2, kCells, [&](double x) { return x <= k * P2.theta / kCells + 1e-15 ? 1.0 : 0.0; });
    const double lo = gamma_cdf(P2, f.node(k));
    const double hi = gamma_cdf(P2, f.node(k + 1));
    const double v = u_infinity(P2, f);
    EXPECT_GE(v, lo);
    EXPECT_LE(v, hi);
    EXPECT_NEAR(v, gamma_cdf(P2, 0.5), 2e-4);
}

TEST(UInfinity, FixedDensityHasUnitMass) {
    const double th = P2.theta;
    const auto f = GridFunction::sample(P2, 64, [&](double x) { return std::log1p(th * th) * (1.0 + th * x) / (th * th); });
    EXPECT_NEAR(u_infinity(P2, f), 1.0, 1e-8);
}

TEST(Variation, Examples) {
    EXPECT_NEAR(variation(identity(P2)), P2.theta, 1e-14);
    const auto ind = GridFunction::sample(P2, 64, [&](double x) { return x <= 0.25 * P2.theta + 1e-15 ? 1.0 : 0.0; });
    EXPECT_NEAR(variation(ind), 1.0, 1e-15);
    const auto c = GridFunction::sample(P2, kCells, [&](double x) { return std::cos(4.0 * std::numbers::pi * x / P2.theta); });
    EXPECT_NEAR(variation(c), 8.0, 2.0 / kCells * 4.0 * std::numbers::pi);
}

TEST(Contraction, ConstantFunction) {
    for (std::int64_t m : {1, 2, 3}) {
        const auto p = make_params(m);
        const auto one = GridFunction::sample(p, 128, [](double) { return 1.0; });
        const auto r = contraction_report(p, one, 5, 200);
        EXPECT_TRUE(r.all_pass);
        for (double v : r.variations) {
            EXPECT_NEAR(v, 0.0, 1e-12);
        }
    }
}

TEST(Contraction, IdentityThreeSteps) {
    const auto r = contraction_report(P2, identity(P2, 1024), 3, 2000);
    ASSERT_EQ(r.variations.size(), 4u);
    EXPECT_NEAR(r.bounds[3], P2.theta / 27.0, 1e-15);
    EXPECT_NEAR(r.bounds[3], 0.0261891, 1e-7);
    EXPECT_LE(r.variations[3], r.bounds[3] + r.slack);
    EXPECT_LE(r.sup_deviations[3], r.bounds[3] + r.slack);
    EXPECT_TRUE(r.all_pass);
    EXPECT_LT(r.slack, 1e-5);
    EXPECT_THROW(contraction_report(P2, identity(P2, 8), 0, 100), invalid_parameter);
}
