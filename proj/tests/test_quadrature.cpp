#include "d2dcache/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace d2dcache;

TEST(Quadrature, PolynomialIsExact) {
    const auto r = quad::integrate([](double x) { return 3 * x * x + 2 * x + 1; }, 0.0, 2.0);
    EXPECT_NEAR(r.value, 8.0 + 4.0 + 2.0, 1e-13);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.evaluations, 15);
}

TEST(Quadrature, SineOverHalfPeriod) {
    const auto r = quad::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
    EXPECT_NEAR(r.value, 2.0, 1e-12);
}

TEST(Quadrature, EndpointSingularityConverges) {
    const auto r = quad::integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0, {1e-10, 1e-14, 4000});
    EXPECT_NEAR(r.value, 2.0 / 3.0, 1e-9);
    EXPECT_TRUE(r.converged);
}

TEST(Quadrature, BreakpointOnKink) {
    auto f = [](double x) { return std::abs(x - 0.3); };
    const auto pts = quad::breakpoints(0.0, 1.0, {0.3});
    const auto with = quad::integrate(f, pts);
    EXPECT_NEAR(with.value, 0.5 * (0.09 + 0.49), 1e-14);
    EXPECT_EQ(with.evaluations, 30);
}

TEST(Quadrature, BreakpointsAreClippedSortedUnique) {
    const auto pts = quad::breakpoints(0.0, 2.0, {1.5, -1.0, 0.5, 1.5, 2.0, 3.0});
    const std::vector<double> expected{0.0, 0.5, 1.5, 2.0};
    EXPECT_EQ(pts, expected);
}

TEST(Quadrature, EmptyAndDegenerateIntervals) {
    EXPECT_EQ(quad::integrate([](double) { return 1.0; }, 1.0, 1.0).value, 0.0);
    const std::vector<double> one{0.5};
    EXPECT_EQ(quad::integrate([](double) { return 1.0; }, std::span<const double>(one)).value, 0.0);
}

TEST(Quadrature, SubdivisionBudgetReportsNonConvergence) {
    const auto r = quad::integrate([](double x) { return std::sin(1.0 / (x + 1e-6)); }, 0.0, 1.0,
                                   {1e-15, 0.0, 3});
    EXPECT_FALSE(r.converged);
}
