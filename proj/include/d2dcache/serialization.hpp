#pragma once

// JSON and CSV encodings of the public value types. Doubles use the shortest
// representation that parses back to the same bits.

#include "d2dcache/codes.hpp"
#include "d2dcache/config.hpp"
#include "d2dcache/cost_model.hpp"
#include "d2dcache/errors.hpp"
#include "d2dcache/geometry.hpp"
#include "d2dcache/optimizer.hpp"
#include "d2dcache/simulator.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace d2dcache {

using json = nlohmann::json;

inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

// -- SystemConfig ----------------------------------------------------------

inline void to_json(json& j, const SystemConfig& c) {
    j = json{{"m", c.m},         {"lambda", c.lambda},       {"omega", c.omega},
             {"r", c.r},         {"v", c.v},                 {"gamma_d2d", c.gamma_d2d},
             {"gamma_bs", c.gamma_bs}, {"sigma", c.sigma},   {"theta", c.theta}};
}

/// Missing keys keep their current values, so a partial document overlays
/// the defaults.
inline void from_json(const json& j, SystemConfig& c) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    auto field = [&](const char* key, double& out) {
        if (!j.contains(key)) return;
        if (!j.at(key).is_number()) throw ConfigError(std::string("config field '") + key + "' must be a number");
        out = j.at(key).get<double>();
    };
    field("m", c.m);
    field("lambda", c.lambda);
    field("omega", c.omega);
    field("r", c.r);
    field("v", c.v);
    field("gamma_d2d", c.gamma_d2d);
    field("gamma_bs", c.gamma_bs);
    field("sigma", c.sigma);
    field("theta", c.theta);
}

// -- CodeSpec --------------------------------------------------------------

inline void to_json(json& j, const CodeSpec& c) {
    j = json{{"scheme", std::string(to_string(c.scheme))},
             {"n", c.n}, {"k", c.k}, {"d", c.d},
             {"alpha", c.alpha}, {"beta", c.beta}, {"gamma", c.gamma}};
}

inline void from_json(const json& j, CodeSpec& c) {
    const auto scheme = parse_scheme(j.at("scheme").get<std::string>());
    if (!scheme) throw ConfigError("unknown scheme '" + j.at("scheme").get<std::string>() + "'");
    c.scheme = *scheme;
    c.n = j.at("n").get<int>();
    c.k = j.at("k").get<int>();
    c.d = j.at("d").get<int>();
    c.alpha = j.at("alpha").get<double>();
    c.beta = j.at("beta").get<double>();
    c.gamma = j.at("gamma").get<double>();
}

// -- GeometryTable ---------------------------------------------------------

inline void to_json(json& j, const GeometryTable& g) {
    json entries = json::array();
    for (int n = 1; n <= g.n_max; ++n)
        for (int q = 1; q <= n; ++q) entries.push_back({{"q", q}, {"n", n}, {"L", g.link(q, n)}});
    j = json{{"r", g.r},           {"gamma_d2d", g.gamma_d2d}, {"gamma_bs", g.gamma_bs},
             {"v", g.v},           {"bs_cost", g.bs_cost},     {"entries", std::move(entries)}};
}

inline void from_json(const json& j, GeometryTable& g) {
    g.r = j.at("r").get<double>();
    g.gamma_d2d = j.at("gamma_d2d").get<double>();
    g.gamma_bs = j.at("gamma_bs").get<double>();
    g.v = j.at("v").get<double>();
    g.bs_cost = j.at("bs_cost").get<double>();
    int n_max = 0;
    for (const auto& e : j.at("entries")) n_max = std::max(n_max, e.at("n").get<int>());
    g.n_max = n_max;
    g.entries.assign(n_max > 0 ? GeometryTable::index(n_max, n_max) + 1 : 0, 0.0);
    std::vector<bool> seen(g.entries.size(), false);
    for (const auto& e : j.at("entries")) {
        const int q = e.at("q").get<int>();
        const int n = e.at("n").get<int>();
        if (q < 1 || q > n) throw ConfigError("geometry entry with q outside 1..n");
        const auto idx = GeometryTable::index(q, n);
        g.entries[idx] = e.at("L").get<double>();
        seen[idx] = true;
    }
    for (bool s : seen)
        if (!s) throw ConfigError("geometry table JSON is missing entries");
}

// -- CostBreakdown / optimization ------------------------------------------

inline void to_json(json& j, const CostBreakdown& c) {
    j = json{{"method", c.method},   {"reconstruction", c.reconstruction},
             {"repair", c.repair},   {"storage", c.storage},
             {"total", c.total}};
}

inline void from_json(const json& j, CostBreakdown& c) {
    c.method = j.at("method").get<CodeSpec>();
    c.reconstruction = j.at("reconstruction").get<double>();
    c.repair = j.at("repair").get<double>();
    c.storage = j.at("storage").get<double>();
    c.total = j.at("total").get<double>();
}

inline void to_json(json& j, const OptimizationResult& r) {
    json frontier = json::array();
    for (const auto& c : r.frontier) frontier.push_back({{"code", c.code}, {"total", c.total}});
    j = json{{"best", r.best},
             {"cost", r.cost},
             {"savings_vs_simple", std::isfinite(r.savings_vs_simple) ? json(r.savings_vs_simple) : json(nullptr)},
             {"frontier", std::move(frontier)}};
}

// -- SimResult -------------------------------------------------------------

inline void to_json(json& j, const SimCounters& c) {
    j = json{{"requests", c.requests},     {"bs_downloads", c.bs_downloads},
             {"repairs", c.repairs},       {"arrivals", c.arrivals},
             {"departures", c.departures}, {"repair_starvations", c.repair_starvations}};
}

inline void from_json(const json& j, SimCounters& c) {
    c.requests = j.at("requests").get<std::uint64_t>();
    c.bs_downloads = j.at("bs_downloads").get<std::uint64_t>();
    c.repairs = j.at("repairs").get<std::uint64_t>();
    c.arrivals = j.at("arrivals").get<std::uint64_t>();
    c.departures = j.at("departures").get<std::uint64_t>();
    c.repair_starvations = j.at("repair_starvations").get<std::uint64_t>();
}

inline void to_json(json& j, const SimResult& r) {
    j = json{{"method", r.method},
             {"fidelity", std::string(to_string(r.fidelity))},
             {"seed", r.seed},
             {"horizon", r.horizon},
             {"replications", r.replications},
             {"mean_total", r.mean_total},
             {"reconstruction", r.reconstruction},
             {"repair", r.repair},
             {"storage", r.storage},
             {"ci95_halfwidth", r.ci95_halfwidth},
             {"mean_population", r.mean_population},
             {"initial_population", r.initial_population},
             {"final_population", r.final_population},
             {"min_storage", r.min_storage},
             {"max_storage", r.max_storage},
             {"counters", r.counters}};
}

inline void from_json(const json& j, SimResult& r) {
    r.method = j.at("method").get<CodeSpec>();
    const auto fid = parse_fidelity(j.at("fidelity").get<std::string>());
    if (!fid) throw ConfigError("unknown fidelity");
    r.fidelity = *fid;
    r.seed = j.at("seed").get<std::uint64_t>();
    r.horizon = j.at("horizon").get<double>();
    r.replications = j.at("replications").get<int>();
    r.mean_total = j.at("mean_total").get<double>();
    r.reconstruction = j.at("reconstruction").get<double>();
    r.repair = j.at("repair").get<double>();
    r.storage = j.at("storage").get<double>();
    r.ci95_halfwidth = j.at("ci95_halfwidth").get<double>();
    r.mean_population = j.at("mean_population").get<double>();
    r.initial_population = j.at("initial_population").get<long>();
    r.final_population = j.at("final_population").get<long>();
    r.min_storage = j.at("min_storage").get<int>();
    r.max_storage = j.at("max_storage").get<int>();
    r.counters = j.at("counters").get<SimCounters>();
}

// -- CSV -------------------------------------------------------------------

inline constexpr std::string_view kCostCsvHeader =
    "method,n,k,d,omega,sigma,reconstruction,repair,storage,total";

inline std::string cost_csv_row(const CostBreakdown& c, double omega, double sigma) {
    std::string row;
    row += to_string(c.method.scheme);
    for (int v : {c.method.n, c.method.k, c.method.d}) row += "," + std::to_string(v);
    for (double v : {omega, sigma, c.reconstruction, c.repair, c.storage, c.total})
        row += "," + format_double(v);
    return row;
}

inline constexpr std::string_view kSimCsvHeader =
    "method,n,k,d,omega,sigma,reconstruction,repair,storage,total,ci95,seed,horizon,fidelity,"
    "counters.requests,counters.bs_downloads,counters.repairs,counters.arrivals,"
    "counters.departures,counters.repair_starvations";

inline std::string sim_csv_row(const SimResult& r, double omega, double sigma) {
    CostBreakdown c;
    c.method = r.method;
    c.reconstruction = r.reconstruction;
    c.repair = r.repair;
    c.storage = r.storage;
    c.total = r.mean_total;
    std::string row = cost_csv_row(c, omega, sigma);
    row += "," + format_double(r.ci95_halfwidth);
    row += "," + std::to_string(r.seed);
    row += "," + format_double(r.horizon);
    row += ",";
    row += to_string(r.fidelity);
    for (auto v : {r.counters.requests, r.counters.bs_downloads, r.counters.repairs,
                   r.counters.arrivals, r.counters.departures, r.counters.repair_starvations})
        row += "," + std::to_string(v);
    return row;
}

inline constexpr std::string_view kSweepCsvHeader = "omega,sigma,method,n,k,d,total,savings_pct";

inline std::string sweep_csv_row(double omega, double sigma, const CostBreakdown& c,
                                 double savings_fraction) {
    std::string row = format_double(omega) + "," + format_double(sigma) + ",";
    row += to_string(c.method.scheme);
    for (int v : {c.method.n, c.method.k, c.method.d}) row += "," + std::to_string(v);
    row += "," + format_double(c.total) + "," + format_double(100.0 * savings_fraction);
    return row;
}

} // namespace d2dcache
