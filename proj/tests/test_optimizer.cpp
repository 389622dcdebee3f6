#include "d2dcache/optimizer.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace d2dcache;

namespace {

const GeometryTable& table() {
    static const auto t = build_geometry_table(SystemConfig{}, 6);
    return t;
}

SystemConfig at(double sigma, double log_omega) {
    SystemConfig c;
    c.sigma = sigma;
    c.omega = std::pow(10.0, log_omega);
    return c;
}

} // namespace

TEST(Optimizer, FrontierSizes) {
    const SearchRanges ranges;
    EXPECT_EQ(optimize_replication(at(2, -2), ranges, table()).frontier.size(), 5u);
    EXPECT_EQ(feasible_tuple_count(ranges.coded_n), 34u);
    const auto msr = optimize_regenerating(at(2, -2), Scheme::MSR, ranges, table());
    EXPECT_EQ(msr.frontier.size(), 34u);
    std::set<std::tuple<int, int, int>> distinct;
    for (const auto& c : msr.frontier) distinct.emplace(c.code.n, c.code.k, c.code.d);
    EXPECT_EQ(distinct.size(), 34u);
}

TEST(Optimizer, SingleDegreeRangeHasThreeCandidates) {
    SearchRanges ranges;
    ranges.coded_n = {3, 3};
    const auto r = optimize_regenerating(at(2, -2), Scheme::MBR, ranges, table());
    ASSERT_EQ(r.frontier.size(), 3u);
    EXPECT_EQ(r.frontier[0].code.k, 1);
    EXPECT_EQ(r.frontier[1].code.d, 2);
    EXPECT_EQ(r.frontier[2].code.k, 2);
}

TEST(Optimizer, BestIsFrontierMinimum) {
    const auto r = optimize_regenerating(at(100, -1), Scheme::MSR, SearchRanges{}, table());
    for (const auto& c : r.frontier) EXPECT_GE(c.total, r.cost.total * (1 - 1e-12));
    EXPECT_EQ(r.best, r.cost.method);
    EXPECT_NEAR(r.savings_vs_simple, 1 - r.cost.total / simple_caching_cost(at(100, -1), table()).total, 1e-15);
}

TEST(Optimizer, CheapStorageFavorsMostReplicas) {
    for (double lw = -3; lw <= 0; lw += 0.5)
        EXPECT_EQ(optimize_replication(at(0.01, lw), SearchRanges{}, table()).best.n, 6) << lw;
}

TEST(Optimizer, ExpensiveStorageHighPopularityMsr) {
    for (double lw : {-1.0, -0.5}) {
        const auto best = optimize_regenerating(at(100, lw), Scheme::MSR, SearchRanges{}, table()).best;
        EXPECT_EQ(best.n, 6);
        EXPECT_EQ(best.k, 5);
        EXPECT_EQ(best.d, 5);
    }
}

TEST(Optimizer, ArgminInvariantUnderRateScaling) {
    SystemConfig a = at(5, -2);
    SystemConfig b = a;
    b.lambda *= 7;
    b.omega *= 7;
    b.sigma *= 7;
    for (auto scheme : {Scheme::MSR, Scheme::MBR})
        EXPECT_EQ(optimize_regenerating(a, scheme, SearchRanges{}, table()).best,
                  optimize_regenerating(b, scheme, SearchRanges{}, table()).best);
    EXPECT_EQ(optimize_replication(a, SearchRanges{}, table()).best,
              optimize_replication(b, SearchRanges{}, table()).best);
}

TEST(Optimizer, Deterministic) {
    const auto a = best_method(at(2, -1.5), SearchRanges{}, table());
    const auto b = best_method(at(2, -1.5), SearchRanges{}, table());
    EXPECT_EQ(a.winner, b.winner);
    EXPECT_EQ(a.winner_total, b.winner_total);
    EXPECT_EQ(a.msr.best, b.msr.best);
}

TEST(Optimizer, TiesPreferEarlierMethod) {
    // at omega = 1 with sigma = 2, replication n=6 and the (6,1,1) codes cost the same
    const auto cmp = best_method(at(2, 0), SearchRanges{}, table());
    EXPECT_EQ(cmp.winner, Scheme::Replication);
    EXPECT_NEAR(cmp.savings_vs_simple, 0.961, 0.015);
}

TEST(Optimizer, ModerateStorageWinners) {
    const Scheme expected[] = {Scheme::MBR, Scheme::MSR, Scheme::MSR, Scheme::MSR,
                               Scheme::MSR, Scheme::MSR, Scheme::MSR, Scheme::Replication};
    for (int i = 0; i < 8; ++i)
        EXPECT_EQ(best_method(at(2, -3.5 + 0.5 * i), SearchRanges{}, table()).winner, expected[i]) << i;
}

TEST(Optimizer, ZeroOmegaLeavesSavingsUndefined) {
    const auto r = optimize_replication(at(2, -2), SearchRanges{}, table());
    SystemConfig still = at(2, -2);
    still.omega = 0;
    const auto idle = optimize_replication(still, SearchRanges{}, table());
    EXPECT_TRUE(std::isnan(idle.savings_vs_simple));
    EXPECT_FALSE(std::isnan(r.savings_vs_simple));
    EXPECT_EQ(idle.best.n, 2);
}

TEST(Optimizer, RangeValidation) {
    SearchRanges bad;
    bad.coded_n = {5, 4};
    EXPECT_THROW(validate(bad, 100), ConfigError);
    bad = SearchRanges{};
    bad.replication_n = {1, 4};
    EXPECT_THROW(validate(bad, 100), ConfigError);
    EXPECT_THROW(validate(SearchRanges{}, 6), ConfigError);
    EXPECT_THROW(optimize_regenerating(at(2, -2), Scheme::Replication, SearchRanges{}, table()), ConfigError);
}
