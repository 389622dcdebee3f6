#pragma once

// Closed-form expected cost rates (energy per unit time) for simple caching,
// n-replication and regenerating codes, plus the operator-side downlink and
// upkeep costs.
//
// Simple caching charges sigma once per caching cycle while the coded methods
// charge n*alpha*sigma as a rate. Both conventions are kept as-is.

#include "d2dcache/codes.hpp"
#include "d2dcache/config.hpp"
#include "d2dcache/errors.hpp"
#include "d2dcache/geometry.hpp"

#include <cmath>
#include <string>

namespace d2dcache {

struct CostBreakdown {
    double reconstruction = 0.0;
    double repair = 0.0;
    double storage = 0.0;
    double total = 0.0;
    CodeSpec method;

    bool operator==(const CostBreakdown&) const = default;
};

namespace cost_detail {

inline CostBreakdown assemble(const CodeSpec& method, double reconstruction, double repair,
                              double storage) {
    CostBreakdown c;
    c.method = method;
    c.reconstruction = reconstruction;
    c.repair = repair;
    c.storage = storage;
    c.total = reconstruction + repair + storage;
    return c;
}

inline void check_table(const SystemConfig& cfg, const GeometryTable& geom, int n_needed) {
    if (geom.r != cfg.r || geom.gamma_d2d != cfg.gamma_d2d)
        throw DomainError("geometry table was built for a different radius or D2D exponent");
    if (geom.n_max < n_needed)
        throw DomainError("geometry table covers n <= " + std::to_string(geom.n_max) +
                          ", need " + std::to_string(n_needed));
}

// sum_{i=1}^{count} L(i, n); empty when count <= 0.
inline double nearest_sum(const GeometryTable& geom, int count, int n) {
    double s = 0.0;
    for (int i = 1; i <= count; ++i) s += geom.link(i, n);
    return s;
}

inline double cycle_length(const SystemConfig& cfg) {
    return 1.0 / cfg.lambda + 1.0 / (cfg.m * cfg.omega);
}

} // namespace cost_detail

/// Renewal approximation for a single uncoded cache: one cycle is the cache
/// lifetime plus the wait for the next (base-station) request.
inline CostBreakdown simple_caching_cost(const SystemConfig& cfg, const GeometryTable& geom) {
    using namespace cost_detail;
    check_table(cfg, geom, 1);
    if (geom.v != cfg.v || geom.gamma_bs != cfg.gamma_bs)
        throw DomainError("geometry table was built for a different base-station setup");
    if (!(cfg.omega > 0.0)) throw DomainError("simple caching needs omega > 0");
    const double cycle = cycle_length(cfg);
    const double d2d = (cfg.m - 1.0) * (cfg.omega / cfg.lambda) * geom.link(1, 1);
    return assemble(make_code(Scheme::SimpleCaching, 1), (d2d + geom.bs_cost) / cycle, 0.0,
                    cfg.sigma / cycle);
}

inline CostBreakdown replication_cost(const SystemConfig& cfg, int n, const GeometryTable& geom) {
    using namespace cost_detail;
    if (!(n < cfg.m)) throw DomainError("replication needs n < m");
    const auto code = make_code(Scheme::Replication, n);
    check_table(cfg, geom, n);
    return assemble(code, (cfg.m - n) * cfg.omega * geom.link(1, n),
                    n * cfg.lambda * geom.link(1, n - 1), n * cfg.sigma);
}

/// Storage-node requesters fetch from their k-1 nearest peers among n-1,
/// empty-node requesters from their k nearest among n; a newcomer pulls beta
/// from each of its d nearest survivors.
inline CostBreakdown regenerating_cost(const SystemConfig& cfg, const CodeSpec& code,
                                       const GeometryTable& geom) {
    using namespace cost_detail;
    if (code.scheme != Scheme::MSR && code.scheme != Scheme::MBR)
        throw FeasibilityError("regenerating_cost needs an MSR or MBR code");
    const auto checked = make_code(code.scheme, code.n, code.k, code.d);
    if (!(checked.n < cfg.m)) throw DomainError("regenerating codes need n < m");
    check_table(cfg, geom, checked.n);

    const int n = checked.n;
    const double recon_storage =
        n * cfg.omega * checked.alpha * nearest_sum(geom, checked.k - 1, n - 1);
    const double recon_empty =
        (cfg.m - n) * cfg.omega * checked.alpha * nearest_sum(geom, checked.k, n);
    const double repair = n * cfg.lambda * checked.beta * nearest_sum(geom, checked.d, n - 1);
    return assemble(checked, recon_storage + recon_empty, repair, n * checked.alpha * cfg.sigma);
}

/// Dispatches on code.scheme.
inline CostBreakdown method_cost(const SystemConfig& cfg, const CodeSpec& code,
                                 const GeometryTable& geom) {
    switch (code.scheme) {
    case Scheme::SimpleCaching: return simple_caching_cost(cfg, geom);
    case Scheme::Replication: return replication_cost(cfg, code.n, geom);
    case Scheme::MSR:
    case Scheme::MBR: return regenerating_cost(cfg, code, geom);
    }
    throw FeasibilityError("unknown scheme");
}

/// Cost of serving every request from the base station.
inline double downlink_cost(const SystemConfig& cfg, double bs_cost) {
    return cfg.m * cfg.omega * bs_cost;
}

inline double downlink_cost(const SystemConfig& cfg) {
    return downlink_cost(cfg, base_station_cost(cfg.r, cfg.v, cfg.gamma_bs));
}

/// Operator's cost of keeping the D2D community: transmission weighted by
/// theta, storage by its own unit weight.
inline double upkeep_cost(const SystemConfig& cfg, const CostBreakdown& method_cost) {
    const auto& code = method_cost.method;
    double correction = 0.0;
    switch (code.scheme) {
    case Scheme::SimpleCaching:
        correction = cfg.sigma / cost_detail::cycle_length(cfg);
        break;
    case Scheme::Replication:
        correction = code.n * cfg.sigma;
        break;
    case Scheme::MSR:
    case Scheme::MBR:
        correction = code.n * code.alpha * cfg.sigma;
        break;
    }
    return cfg.theta * method_cost.total - correction * (cfg.theta - 1.0);
}

/// G = downlink / upkeep. G > 1 means caching pays off for the operator.
inline double operator_gain(const SystemConfig& cfg, const CostBreakdown& method_cost,
                            double bs_cost) {
    const double upkeep = upkeep_cost(cfg, method_cost);
    if (!(upkeep > 0.0)) throw DomainError("operator gain undefined for nonpositive upkeep");
    return downlink_cost(cfg, bs_cost) / upkeep;
}

inline double operator_gain(const SystemConfig& cfg, const CostBreakdown& method_cost) {
    return operator_gain(cfg, method_cost, base_station_cost(cfg.r, cfg.v, cfg.gamma_bs));
}

} // namespace d2dcache
