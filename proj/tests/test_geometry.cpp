#include "d2dcache/geometry.hpp"
#include "d2dcache/verification/sampling.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace d2dcache;
namespace ver = d2dcache::verification;

constexpr double pi = std::numbers::pi;

TEST(IntersectionArea, ContainedAndDisjoint) {
    EXPECT_DOUBLE_EQ(circle_intersection_area(2.0, 1.0, 0.5), pi);
    EXPECT_DOUBLE_EQ(circle_intersection_area(2.0, 1.0, 1.0), pi);
    EXPECT_EQ(circle_intersection_area(1.0, 1.0, 2.5), 0.0);
    EXPECT_NEAR(circle_intersection_area(1.0, 1.0, 2.0), 0.0, 1e-12);
}

TEST(IntersectionArea, EqualUnitCirclesAtUnitDistance) {
    EXPECT_NEAR(circle_intersection_area(1.0, 1.0, 1.0), 2 * pi / 3 - std::sqrt(3.0) / 2, 1e-12);
}

TEST(IntersectionArea, SymmetricInRadii) {
    for (double R : {0.3, 1.0, 2.2})
        for (double r : {0.1, 0.9, 1.7})
            for (double v : {0.0, 0.4, 1.1, 2.0, 3.5})
                EXPECT_DOUBLE_EQ(circle_intersection_area(R, r, v), circle_intersection_area(r, R, v));
}

TEST(IntersectionArea, MatchesLensFormula) {
    for (double R : {1.0, 1.5, 3.0})
        for (double r : {0.2, 0.8, 1.0})
            for (double v = 0.05; v < R + r; v += 0.13)
                EXPECT_NEAR(circle_intersection_area(R, r, v), ver::lens_area(R, r, v), 1e-7)
                    << "R=" << R << " r=" << r << " v=" << v;
}

TEST(IntersectionArea, ContinuousAcrossBranchSwitch) {
    const double R = 2.0, r = 1.0;
    const double s = std::sqrt(R * R - r * r);
    EXPECT_NEAR(circle_intersection_area(R, r, s - 1e-9), circle_intersection_area(R, r, s + 1e-9), 1e-7);
    EXPECT_NEAR(circle_intersection_area(R, r, R - r + 1e-12), pi * r * r, 1e-5);
}

TEST(IntersectionArea, BoundedAndNonIncreasingInDistance) {
    double prev = pi;
    for (double v = 0.0; v <= 2.01; v += 0.01) {
        const double a = circle_intersection_area(1.3, 1.0, v);
        EXPECT_GE(a, 0.0);
        EXPECT_LE(a, pi);
        EXPECT_LE(a, prev + 1e-12);
        prev = a;
    }
}

TEST(IntersectionArea, MatchesDartThrowing) {
    EXPECT_NEAR(circle_intersection_area(1.0, 0.7, 1.2), ver::dart_intersection_area(1.0, 0.7, 1.2, 2'000'000, 3),
                5e-3);
}

TEST(IntersectionArea, RejectsBadArguments) {
    EXPECT_THROW(circle_intersection_area(0.0, 1.0, 0.5), DomainError);
    EXPECT_THROW(circle_intersection_area(1.0, -1.0, 0.5), DomainError);
    EXPECT_THROW(circle_intersection_area(1.0, 1.0, -0.1), DomainError);
}

TEST(Coverage, MonotoneFromZeroToOne) {
    for (double t : {0.0, 0.3, 1.0}) {
        double prev = 0.0;
        EXPECT_EQ(coverage_probability(0.0, 1.0, t), 0.0);
        for (double x = 0.02; x <= 1.0 + t; x += 0.02) {
            const double p = coverage_probability(x, 1.0, t);
            EXPECT_GE(p, prev - 1e-14);
            prev = p;
        }
        EXPECT_EQ(coverage_probability(1.0 + t, 1.0, t), 1.0);
    }
}

TEST(Coverage, CenterIsRadiusSquared) {
    EXPECT_NEAR(coverage_probability(0.5, 1.0, 0.0), 0.25, 1e-14);
}

TEST(Coverage, MatchesSampling) {
    EXPECT_NEAR(coverage_probability(0.8, 1.0, 0.6), ver::dart_coverage(0.8, 1.0, 0.6, 1'000'000, 11), 3e-3);
}

TEST(Coverage, RejectsOffsetOutsideDisk) {
    EXPECT_THROW(coverage_probability(0.5, 1.0, 1.5), DomainError);
    EXPECT_THROW(coverage_probability(-0.5, 1.0, 0.5), DomainError);
}

TEST(NeighborDistance, CenterMomentsOfSingleNode) {
    EXPECT_NEAR(expected_neighbor_distance(1, 1, 1.0, 0.0), 2.0 / 3.0, 1e-9);
    EXPECT_NEAR(expected_neighbor_distance_power(1, 1, 1.0, 0.0, 2.0), 0.5, 1e-9);
}

TEST(NeighborDistance, SecondMomentAtOffset) {
    // E|X - p|^2 = r^2/2 + t^2 for a single uniform node
    for (double t : {0.2, 0.7, 1.0})
        EXPECT_NEAR(expected_neighbor_distance_power(1, 1, 1.0, t, 2.0), 0.5 + t * t, 1e-8);
}

TEST(NeighborDistance, IncreasingInRankDecreasingInCount) {
    for (int q = 1; q < 5; ++q)
        EXPECT_LT(expected_neighbor_distance(5, q, 1.0, 0.4), expected_neighbor_distance(5, q + 1, 1.0, 0.4));
    for (int n = 2; n < 6; ++n)
        EXPECT_GT(expected_neighbor_distance(n, 2, 1.0, 0.4), expected_neighbor_distance(n + 1, 2, 1.0, 0.4));
}

TEST(NeighborDistance, MatchesSortingMonteCarlo) {
    const double exact = expected_neighbor_distance(3, 2, 1.0, 0.7);
    const double sampled = ver::sampled_neighbor_power(3, 2, 1.0, 0.7, 1.0, 1'000'000, 5);
    EXPECT_NEAR(exact / sampled, 1.0, 5e-3);
}

TEST(NeighborDistance, RejectsBadRank) {
    EXPECT_THROW(expected_neighbor_distance(3, 0, 1.0, 0.0), DomainError);
    EXPECT_THROW(expected_neighbor_distance(3, 4, 1.0, 0.0), DomainError);
    EXPECT_THROW(expected_neighbor_distance_power(3, 1, 1.0, 0.0, 0.5), DomainError);
}

TEST(LinkCost, TwoPointMoments) {
    EXPECT_NEAR(link_cost(1, 1, 1.0, 2.0), ver::two_point_second_moment(1.0), 1e-6);
    EXPECT_NEAR(link_cost(1, 1, 1.0, 1.0), 128.0 / (45.0 * pi), 1e-7);
}

TEST(LinkCost, ScalesWithRadius) {
    EXPECT_NEAR(link_cost(2, 4, 2.5, 4.0) / link_cost(2, 4, 1.0, 4.0), std::pow(2.5, 4.0), 1e-6);
}

TEST(LinkCost, MatchesSamplingOracle) {
    for (auto [q, n] : {std::pair{1, 3}, std::pair{2, 5}, std::pair{4, 6}}) {
        const double exact = link_cost(q, n, 1.0, 4.0);
        const double sampled = ver::sampled_link_cost(q, n, 1.0, 4.0, 1'000'000, 100 + q + n);
        EXPECT_NEAR(exact / sampled, 1.0, 0.01) << "q=" << q << " n=" << n;
    }
}

TEST(BaseStationCost, SecondMomentIdentity) {
    EXPECT_NEAR(base_station_cost(1.0, 20.0, 2.0), 400.5, 1e-6);
    EXPECT_NEAR(base_station_cost(2.0, 5.0, 2.0), ver::base_station_second_moment(2.0, 5.0), 1e-6);
}

TEST(BaseStationCost, MatchesSamplingForOtherExponents) {
    const double exact = base_station_cost(1.0, 3.0, 3.5);
    const double sampled = ver::sampled_base_station_cost(1.0, 3.0, 3.5, 1'000'000, 9);
    EXPECT_NEAR(exact / sampled, 1.0, 5e-3);
}

TEST(BaseStationCost, RequiresStationOutsideCluster) {
    EXPECT_THROW(base_station_cost(1.0, 1.0, 2.0), DomainError);
    EXPECT_THROW(base_station_cost(1.0, 0.5, 2.0), DomainError);
}

TEST(GeometryTableTest, HoldsTriangleOfEntries) {
    const auto table = build_geometry_table(SystemConfig{}, 6);
    EXPECT_EQ(table.entries.size(), 21u);
    EXPECT_NEAR(table.bs_cost, 400.5, 1e-6);
    for (int n = 1; n <= 6; ++n)
        for (int q = 1; q <= n; ++q) EXPECT_DOUBLE_EQ(table.link(q, n), link_cost(q, n, 1.0, 4.0));
    EXPECT_THROW(table.link(1, 7), DomainError);
    EXPECT_THROW(table.link(3, 2), DomainError);
}

TEST(GeometryTableTest, BuildIsDeterministic) {
    EXPECT_EQ(build_geometry_table(SystemConfig{}, 5), build_geometry_table(SystemConfig{}, 5));
}
