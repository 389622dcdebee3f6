#pragma once

#include "d2dcache/codes.hpp"
#include "d2dcache/config.hpp"
#include "d2dcache/cost_model.hpp"
#include "d2dcache/errors.hpp"
#include "d2dcache/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace d2dcache {

struct IntRange {
    int lo = 0;
    int hi = 0;

    bool empty() const { return hi < lo; }
    bool operator==(const IntRange&) const = default;
};

/// Storage degrees searched per method; k and d span 1 <= k <= d <= n-1.
struct SearchRanges {
    IntRange replication_n{2, 6};
    IntRange coded_n{3, 6};

    int max_n() const { return std::max(replication_n.hi, coded_n.hi); }
    bool operator==(const SearchRanges&) const = default;
};

inline void validate(const SearchRanges& ranges, double m) {
    auto check = [m](const IntRange& r, const char* name) {
        if (r.empty()) throw ConfigError(std::string(name) + " range is empty");
        if (r.lo < 2) throw ConfigError(std::string(name) + " range must start at n >= 2");
        if (!(r.hi < m)) throw ConfigError(std::string(name) + " range upper bound must be < m");
    };
    check(ranges.replication_n, "replication");
    check(ranges.coded_n, "coded");
}

struct Candidate {
    CodeSpec code;
    double total = 0.0;

    bool operator==(const Candidate&) const = default;
};

struct OptimizationResult {
    CodeSpec best;
    CostBreakdown cost;
    double savings_vs_simple = std::numeric_limits<double>::quiet_NaN();
    std::vector<Candidate> frontier;  ///< every evaluated candidate, in enumeration order
};

/// Relative slack under which two totals count as tied; ties keep the
/// earlier (smaller) candidate.
inline constexpr double kTieTolerance = 1e-12;

inline bool strictly_better(double challenger, double incumbent) {
    return challenger < incumbent - kTieTolerance * std::abs(incumbent);
}

namespace optimizer_detail {

inline double simple_total(const SystemConfig& cfg, const GeometryTable& geom) {
    if (!(cfg.omega > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return simple_caching_cost(cfg, geom).total;
}

inline OptimizationResult pick(const SystemConfig& cfg, const GeometryTable& geom,
                               std::vector<CostBreakdown> costs) {
    if (costs.empty()) throw ConfigError("no feasible candidates in search range");
    std::size_t best = 0;
    for (std::size_t i = 1; i < costs.size(); ++i)
        if (strictly_better(costs[i].total, costs[best].total)) best = i;
    OptimizationResult out;
    out.best = costs[best].method;
    out.cost = costs[best];
    out.frontier.reserve(costs.size());
    for (const auto& c : costs) out.frontier.push_back({c.method, c.total});
    out.savings_vs_simple = 1.0 - out.cost.total / simple_total(cfg, geom);
    return out;
}

} // namespace optimizer_detail

/// Exhaustive search over n; ties go to the smallest n.
inline OptimizationResult optimize_replication(const SystemConfig& cfg, const SearchRanges& ranges,
                                               const GeometryTable& geom) {
    validate(ranges, cfg.m);
    std::vector<CostBreakdown> costs;
    for (int n = ranges.replication_n.lo; n <= ranges.replication_n.hi; ++n)
        costs.push_back(replication_cost(cfg, n, geom));
    return optimizer_detail::pick(cfg, geom, std::move(costs));
}

/// Exhaustive search over feasible (n, k, d); ties go to the lexicographically
/// smallest tuple.
inline OptimizationResult optimize_regenerating(const SystemConfig& cfg, Scheme scheme,
                                                const SearchRanges& ranges,
                                                const GeometryTable& geom) {
    if (scheme != Scheme::MSR && scheme != Scheme::MBR)
        throw ConfigError("optimize_regenerating needs MSR or MBR");
    validate(ranges, cfg.m);
    std::vector<CostBreakdown> costs;
    for (int n = ranges.coded_n.lo; n <= ranges.coded_n.hi; ++n)
        for (int k = 1; k <= n - 1; ++k)
            for (int d = k; d <= n - 1; ++d)
                costs.push_back(regenerating_cost(cfg, make_code(scheme, n, k, d), geom));
    return optimizer_detail::pick(cfg, geom, std::move(costs));
}

/// Number of (n, k, d) tuples with n in range and 1 <= k <= d <= n-1.
inline std::size_t feasible_tuple_count(const IntRange& coded_n) {
    std::size_t count = 0;
    for (int n = coded_n.lo; n <= coded_n.hi; ++n)
        count += static_cast<std::size_t>(n - 1) * n / 2;
    return count;
}

struct MethodComparison {
    CostBreakdown simple;
    OptimizationResult replication;
    OptimizationResult msr;
    OptimizationResult mbr;
    Scheme winner = Scheme::SimpleCaching;
    double winner_total = 0.0;
    double savings_vs_simple = 0.0;

    /// Totals ordered simple, replication, MSR, MBR.
    std::array<double, 4> totals() const {
        return {simple.total, replication.cost.total, msr.cost.total, mbr.cost.total};
    }

    const CostBreakdown& winner_cost() const {
        switch (winner) {
        case Scheme::Replication: return replication.cost;
        case Scheme::MSR: return msr.cost;
        case Scheme::MBR: return mbr.cost;
        case Scheme::SimpleCaching: break;
        }
        return simple;
    }
};

/// Compares simple caching with the optimized replication, MSR and MBR
/// configurations. Exact ties favor the earlier method in that order.
inline MethodComparison best_method(const SystemConfig& cfg, const SearchRanges& ranges,
                                    const GeometryTable& geom) {
    MethodComparison out;
    out.simple = simple_caching_cost(cfg, geom);
    out.replication = optimize_replication(cfg, ranges, geom);
    out.msr = optimize_regenerating(cfg, Scheme::MSR, ranges, geom);
    out.mbr = optimize_regenerating(cfg, Scheme::MBR, ranges, geom);

    constexpr std::array<Scheme, 4> order{Scheme::SimpleCaching, Scheme::Replication, Scheme::MSR,
                                          Scheme::MBR};
    const auto totals = out.totals();
    std::size_t best = 0;
    for (std::size_t i = 1; i < totals.size(); ++i)
        if (strictly_better(totals[i], totals[best])) best = i;
    out.winner = order[best];
    out.winner_total = totals[best];
    out.savings_vs_simple = 1.0 - out.winner_total / out.simple.total;
    return out;
}

} // namespace d2dcache
