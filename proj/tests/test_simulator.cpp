#include "d2dcache/cost_model.hpp"
#include "d2dcache/simulator.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>

using namespace d2dcache;

namespace {

const GeometryTable& table() {
    static const auto t = build_geometry_table(SystemConfig{}, 6);
    return t;
}

SimConfig make(const CodeSpec& code, double omega, double horizon, std::uint64_t seed = 1,
               Fidelity fidelity = Fidelity::ChainLevel) {
    SimConfig c;
    c.system.omega = omega;
    c.method = code;
    c.horizon = horizon;
    c.seed = seed;
    c.fidelity = fidelity;
    return c;
}

} // namespace

TEST(Simulator, EventBookkeepingBalances) {
    const auto r = simulate(make(make_code(Scheme::MSR, 5, 3, 4), 0.05, 500), table());
    EXPECT_EQ(r.initial_population + static_cast<long>(r.counters.arrivals) -
                  static_cast<long>(r.counters.departures),
              r.final_population);
    EXPECT_GT(r.counters.requests, 0u);
    EXPECT_EQ(r.counters.bs_downloads, 0u);
    EXPECT_DOUBLE_EQ(r.mean_total, r.reconstruction + r.repair + r.storage);
}

TEST(Simulator, SameSeedSameResult) {
    const auto cfg = make(make_code(Scheme::MBR, 4, 2, 3), 0.01, 300, 42, Fidelity::Spatial);
    EXPECT_EQ(simulate(cfg, table()), simulate(cfg, table()));
    auto other = cfg;
    other.seed = 43;
    EXPECT_NE(simulate(cfg, table()).mean_total, simulate(other, table()).mean_total);
}

TEST(Simulator, MeanPopulationNearM) {
    const auto r = simulate(make(make_code(Scheme::Replication, 3), 0.01, 2000), table());
    EXPECT_NEAR(r.mean_population / 100.0, 1.0, 0.02);
}

TEST(Simulator, StorageDegreeIsMaintained) {
    const auto r = simulate(make(make_code(Scheme::MSR, 6, 4, 5), 0.01, 1000), table());
    EXPECT_EQ(r.max_storage, 6);
    EXPECT_EQ(r.min_storage, 6);
    EXPECT_EQ(r.counters.repair_starvations, 0u);
    EXPECT_GT(r.counters.repairs, 0u);
}

TEST(Simulator, IdleReplicationPaysRepairOnly) {
    const int n = 3;
    const auto r = simulate(make(make_code(Scheme::Replication, n), 0.0, 3000, 5), table());
    EXPECT_EQ(r.counters.requests, 0u);
    EXPECT_EQ(r.reconstruction, 0.0);
    const double analytic = n * table().link(1, n - 1);
    EXPECT_NEAR(r.repair / analytic, 1.0, 0.03);
    EXPECT_NEAR(r.storage, n * 2.0, 1e-9);
}

TEST(Simulator, ChainLevelMatchesAnalytic) {
    SystemConfig sys;
    sys.omega = 0.01;
    const auto code = make_code(Scheme::MSR, 5, 2, 2);
    const double analytic = regenerating_cost(sys, code, table()).total;
    const auto r = replicate(make(code, 0.01, 1000, 3), 4, table());
    EXPECT_NEAR(r.mean_total / analytic, 1.0, 0.05);
}

TEST(Simulator, SimpleCachingMatchesRenewalModel) {
    SystemConfig sys;
    sys.omega = 0.01;
    const double analytic = simple_caching_cost(sys, table()).total;
    const auto r = replicate(make(make_code(Scheme::SimpleCaching, 1), 0.01, 2000, 8), 4, table());
    EXPECT_NEAR(r.mean_total / analytic, 1.0, 0.05);
    EXPECT_GT(r.counters.bs_downloads, 0u);
}

TEST(Simulator, IdenticalSeedsGiveZeroInterval) {
    const std::array<std::uint64_t, 3> seeds{9, 9, 9};
    const auto cfg = make(make_code(Scheme::MBR, 4, 2, 2), 0.05, 200);
    const auto r = replicate(cfg, seeds, table());
    EXPECT_EQ(r.ci95_halfwidth, 0.0);
    EXPECT_EQ(r.replications, 3);
    EXPECT_DOUBLE_EQ(r.mean_total, simulate(make(make_code(Scheme::MBR, 4, 2, 2), 0.05, 200, 9), table()).mean_total);
}

TEST(Simulator, IntervalShrinksWithHorizon) {
    const auto code = make_code(Scheme::Replication, 4);
    const auto shorter = replicate(make(code, 0.01, 100, 17), 6, table());
    const auto longer = replicate(make(code, 0.01, 1600, 17), 6, table());
    EXPECT_GT(shorter.ci95_halfwidth, 0.0);
    EXPECT_LT(longer.ci95_halfwidth, shorter.ci95_halfwidth);
}

TEST(Simulator, ReplicationSeedsAreDistinct) {
    EXPECT_NE(replication_seed(1, 0), replication_seed(1, 1));
    EXPECT_NE(replication_seed(1, 0), replication_seed(2, 0));
    EXPECT_EQ(replication_seed(5, 3), replication_seed(5, 3));
}

TEST(Simulator, RejectsBadConfigs) {
    auto cfg = make(make_code(Scheme::MSR, 5, 2, 3), 0.01, 100);
    cfg.horizon = 0;
    EXPECT_THROW(simulate(cfg, table()), ConfigError);
    cfg.horizon = 100;
    cfg.warmup = 1.0;
    EXPECT_THROW(simulate(cfg, table()), ConfigError);
    cfg.warmup = 0.1;
    cfg.method.alpha = 0.9;
    EXPECT_THROW(simulate(cfg, table()), FeasibilityError);
    const auto small = build_geometry_table(SystemConfig{}, 3);
    EXPECT_THROW(simulate(make(make_code(Scheme::MSR, 5, 2, 3), 0.01, 100), small), DomainError);
    EXPECT_THROW(replicate(make(make_code(Scheme::MSR, 5, 2, 3), 0.01, 100), 1, table()), ConfigError);
}
