#include "d2dcache/codes.hpp"

#include <gtest/gtest.h>

using namespace d2dcache;

TEST(CodePoints, MsrAtDEqualsK) {
    for (int k = 1; k <= 10; ++k) {
        const auto p = msr_point(k, k);
        EXPECT_DOUBLE_EQ(p.alpha, 1.0 / k);
        EXPECT_DOUBLE_EQ(p.gamma, 1.0);
    }
}

TEST(CodePoints, KnownValues) {
    const auto msr = msr_point(2, 3);  // beta = 1/(2*2), gamma = 3/4
    EXPECT_DOUBLE_EQ(msr.beta, 0.25);
    EXPECT_DOUBLE_EQ(msr.gamma, 0.75);
    EXPECT_DOUBLE_EQ(msr.alpha, 0.5);
    const auto mbr = mbr_point(2, 3);  // beta = 2/(2*5), alpha = gamma = 3/5
    EXPECT_DOUBLE_EQ(mbr.beta, 0.2);
    EXPECT_DOUBLE_EQ(mbr.gamma, 0.6000000000000001);
    EXPECT_EQ(mbr.alpha, mbr.gamma);
}

TEST(CodePoints, TradeoffOrderingIsExhaustive) {
    for (int d = 1; d <= 16; ++d)
        for (int k = 1; k <= d; ++k) {
            const auto msr = msr_point(k, d);
            const auto mbr = mbr_point(k, d);
            EXPECT_LE(msr.alpha, mbr.alpha);
            EXPECT_LE(mbr.gamma, msr.gamma);
            EXPECT_EQ(mbr.alpha, mbr.gamma);
            EXPECT_EQ(msr.gamma, d * msr.beta);
            EXPECT_EQ(mbr.gamma, d * mbr.beta);
            if (k >= 2 && k < d) {
                EXPECT_LT(msr.alpha, mbr.alpha);
                EXPECT_LT(mbr.gamma, msr.gamma);
            }
        }
}

TEST(CodePoints, SingleHelperCollapsesToReplication) {
    const auto msr = msr_point(1, 1);
    const auto mbr = mbr_point(1, 1);
    EXPECT_EQ(msr.alpha, 1.0);
    EXPECT_EQ(msr.gamma, 1.0);
    EXPECT_EQ(mbr.alpha, 1.0);
    EXPECT_EQ(mbr.gamma, 1.0);
}

TEST(MakeCode, SimpleAndReplicationShapes) {
    const auto simple = make_code(Scheme::SimpleCaching, 5, 3, 4);
    EXPECT_EQ(simple.n, 1);
    EXPECT_EQ(simple.d, 0);
    EXPECT_EQ(simple.alpha, 1.0);
    EXPECT_EQ(simple.gamma, 0.0);

    const auto rep = make_code(Scheme::Replication, 4);
    EXPECT_EQ(rep.n, 4);
    EXPECT_EQ(rep.k, 1);
    EXPECT_EQ(rep.d, 1);
    EXPECT_EQ(rep.alpha, 1.0);
    EXPECT_EQ(rep.gamma, 1.0);
}

TEST(MakeCode, RejectsInfeasibleDegrees) {
    EXPECT_THROW(make_code(Scheme::Replication, 1), FeasibilityError);
    EXPECT_THROW(make_code(Scheme::MSR, 4, 3, 2), FeasibilityError);
    EXPECT_THROW(make_code(Scheme::MSR, 4, 2, 4), FeasibilityError);
    EXPECT_THROW(make_code(Scheme::MBR, 4, 0, 2), FeasibilityError);
    EXPECT_THROW(make_code(Scheme::MBR, 1, 1, 1), FeasibilityError);
    EXPECT_THROW(msr_point(2, 1), FeasibilityError);
}

TEST(MakeCode, ErrorNamesViolatedConstraint) {
    try {
        make_code(Scheme::MSR, 4, 2, 4);
        FAIL();
    } catch (const FeasibilityError& e) {
        EXPECT_NE(std::string(e.what()).find("d <= n-1"), std::string::npos);
    }
}

TEST(SchemeNames, RoundTrip) {
    for (auto s : {Scheme::SimpleCaching, Scheme::Replication, Scheme::MSR, Scheme::MBR})
        EXPECT_EQ(parse_scheme(to_string(s)), s);
    EXPECT_FALSE(parse_scheme("raid").has_value());
}
