#pragma once

// Event-driven Monte Carlo of the cluster under one caching method.
//
// Nodes arrive at rate m*lambda, each leaves at rate lambda and requests at
// rate omega. The run starts with round(m) nodes and the file cached. A lost
// storage node is replaced instantly by a uniformly chosen empty node. Costs:
//   ChainLevel - each transfer is charged its expected cost from the
//                geometry table (L(i, s) for the i-th nearest of s holders).
//   Spatial    - nodes get uniform positions in the disk at arrival, fixed
//                for life, and each transfer is charged distance^gamma to the
//                actual nearest holders.
// Dynamics and positions draw from separate streams, so both fidelities see
// the same event sequence for a given seed.

#include "d2dcache/codes.hpp"
#include "d2dcache/config.hpp"
#include "d2dcache/errors.hpp"
#include "d2dcache/geometry.hpp"
#include "d2dcache/parallel.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace d2dcache {

enum class Fidelity { ChainLevel, Spatial };

inline std::string_view to_string(Fidelity f) {
    return f == Fidelity::ChainLevel ? "chain" : "spatial";
}

inline std::optional<Fidelity> parse_fidelity(std::string_view name) {
    if (name == "chain") return Fidelity::ChainLevel;
    if (name == "spatial") return Fidelity::Spatial;
    return std::nullopt;
}

struct SimConfig {
    SystemConfig system;
    CodeSpec method;
    double horizon = 1e4;  ///< in expected node lifetimes T = 1/lambda
    std::uint64_t seed = 1;
    Fidelity fidelity = Fidelity::ChainLevel;
    double warmup = 0.1;   ///< leading fraction of the horizon excluded from averages
};

struct SimCounters {
    std::uint64_t requests = 0;
    std::uint64_t bs_downloads = 0;
    std::uint64_t repairs = 0;
    std::uint64_t arrivals = 0;
    std::uint64_t departures = 0;
    std::uint64_t repair_starvations = 0;

    SimCounters& operator+=(const SimCounters& o) {
        requests += o.requests;
        bs_downloads += o.bs_downloads;
        repairs += o.repairs;
        arrivals += o.arrivals;
        departures += o.departures;
        repair_starvations += o.repair_starvations;
        return *this;
    }
    bool operator==(const SimCounters&) const = default;
};

struct SimResult {
    CodeSpec method;
    Fidelity fidelity = Fidelity::ChainLevel;
    std::uint64_t seed = 0;
    double horizon = 0.0;
    int replications = 1;

    double mean_total = 0.0;
    double reconstruction = 0.0;
    double repair = 0.0;
    double storage = 0.0;
    double ci95_halfwidth = 0.0;  ///< zero for a single run

    double mean_population = 0.0;
    long initial_population = 0;
    long final_population = 0;
    int min_storage = 0;  ///< fewest storage nodes seen after the first event
    int max_storage = 0;
    SimCounters counters;

    bool operator==(const SimResult&) const = default;
};

namespace sim_detail {

/// splitmix64 finalizer; derives independent stream seeds.
inline std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
    return mix(mix(seed) ^ mix(stream + 0x632be59bd9b4e019ULL));
}

class Random {
public:
    explicit Random(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }
    std::size_t index(std::size_t size) {
        return std::min(size - 1, static_cast<std::size_t>(uniform() * static_cast<double>(size)));
    }

private:
    std::mt19937_64 engine_;
};

struct Node {
    double x = 0.0;
    double y = 0.0;
};

template <class T>
T take(std::vector<T>& v, std::size_t i) {
    T out = v[i];
    v[i] = v.back();
    v.pop_back();
    return out;
}

class Run {
public:
    Run(const SimConfig& cfg, const GeometryTable& geom)
        : cfg_(cfg), sys_(cfg.system), geom_(geom),
          dynamics_(stream_seed(cfg.seed, 0)), placement_(stream_seed(cfg.seed, 1)) {}

    SimResult execute() {
        const double end = cfg_.horizon / sys_.lambda;
        const double warm = cfg_.warmup * end;
        const auto scheme = cfg_.method.scheme;
        const int n = cfg_.method.n;

        const long initial = std::lround(sys_.m);
        for (long i = 0; i < initial; ++i) empty_.push_back(place());
        const int holders = scheme == Scheme::SimpleCaching ? 1 : n;
        for (int i = 0; i < holders && !empty_.empty(); ++i) storage_.push_back(take(empty_, 0));

        SimResult res;
        res.method = cfg_.method;
        res.fidelity = cfg_.fidelity;
        res.seed = cfg_.seed;
        res.horizon = cfg_.horizon;
        res.initial_population = initial;
        res.min_storage = res.max_storage = static_cast<int>(storage_.size());

        double t = 0.0;
        double pop_area = 0.0;
        double storage_area = 0.0;
        while (true) {
            const std::size_t pop = storage_.size() + empty_.size();
            const double arrival_rate = sys_.m * sys_.lambda;
            const double departure_rate = pop * sys_.lambda;
            const double request_rate = requesters() * sys_.omega;
            const double total_rate = arrival_rate + departure_rate + request_rate;
            const double next = t + dynamics_.exponential(total_rate);

            // time-weighted accumulation over [max(t, warm), min(next, end)]
            const double lo = std::max(t, warm);
            const double hi = std::min(next, end);
            if (hi > lo) {
                pop_area += (hi - lo) * static_cast<double>(pop);
                storage_area += (hi - lo) * static_cast<double>(storage_.size());
            }
            if (next >= end) break;
            t = next;
            measuring_ = t >= warm;

            const double pick = dynamics_.uniform() * total_rate;
            if (pick < arrival_rate) {
                on_arrival();
            } else if (pick < arrival_rate + departure_rate) {
                on_departure();
            } else {
                on_request();
            }
            res.min_storage = std::min(res.min_storage, static_cast<int>(storage_.size()));
            res.max_storage = std::max(res.max_storage, static_cast<int>(storage_.size()));
        }

        const double window = end - warm;
        res.reconstruction = reconstruction_ / window;
        res.repair = repair_ / window;
        if (scheme == Scheme::SimpleCaching)
            res.storage = cache_creations_ * sys_.sigma / window;
        else
            res.storage = storage_area * cfg_.method.alpha * sys_.sigma / window;
        res.mean_total = res.reconstruction + res.repair + res.storage;
        res.mean_population = pop_area / window;
        res.final_population = static_cast<long>(storage_.size() + empty_.size());
        res.counters = counters_;
        return res;
    }

private:
    Node place() {
        if (cfg_.fidelity != Fidelity::Spatial) return {};
        const double rho = sys_.r * std::sqrt(placement_.uniform());
        const double phi = 2.0 * std::numbers::pi * placement_.uniform();
        return {rho * std::cos(phi), rho * std::sin(phi)};
    }

    std::size_t requesters() const {
        switch (cfg_.method.scheme) {
        case Scheme::SimpleCaching:  // the cache holder never requests
        case Scheme::Replication: return empty_.size();
        case Scheme::MSR:
        case Scheme::MBR: return storage_.size() + empty_.size();
        }
        return 0;
    }

    // Cost of pulling from the `count` nearest storage nodes, excluding the
    // requester itself when it is storage node `self`.
    double fetch(const Node& at, int count, std::optional<std::size_t> self = std::nullopt) {
        const int available = static_cast<int>(storage_.size()) - (self ? 1 : 0);
        count = std::min(count, available);
        if (count <= 0) return 0.0;
        if (cfg_.fidelity == Fidelity::ChainLevel) {
            double s = 0.0;
            for (int i = 1; i <= count; ++i) s += geom_.link(i, available);
            return s;
        }
        scratch_.clear();
        for (std::size_t i = 0; i < storage_.size(); ++i) {
            if (self && *self == i) continue;
            const double dx = storage_[i].x - at.x;
            const double dy = storage_[i].y - at.y;
            scratch_.push_back(std::pow(dx * dx + dy * dy, 0.5 * sys_.gamma_d2d));
        }
        std::partial_sort(scratch_.begin(), scratch_.begin() + count, scratch_.end());
        double s = 0.0;
        for (int i = 0; i < count; ++i) s += scratch_[i];
        return s;
    }

    double base_station(const Node& at) const {
        if (cfg_.fidelity == Fidelity::ChainLevel) return geom_.bs_cost;
        const double dx = at.x - sys_.v;
        return std::pow(dx * dx + at.y * at.y, 0.5 * sys_.gamma_bs);
    }

    void repair_with(const Node& newcomer) {
        const double cost = cfg_.method.beta * fetch(newcomer, cfg_.method.d);
        if (measuring_) repair_ += cost;
        storage_.push_back(newcomer);
        ++counters_.repairs;
    }

    void on_arrival() {
        ++counters_.arrivals;
        const Node node = place();
        if (pending_repairs_ > 0) {
            --pending_repairs_;
            repair_with(node);
            return;
        }
        empty_.push_back(node);
    }

    void on_departure() {
        ++counters_.departures;
        const std::size_t pop = storage_.size() + empty_.size();
        const std::size_t victim = dynamics_.index(pop);
        if (victim >= storage_.size()) {
            take(empty_, victim - storage_.size());
            return;
        }
        take(storage_, victim);
        if (cfg_.method.scheme == Scheme::SimpleCaching) return;  // file lost
        if (empty_.empty()) {
            ++counters_.repair_starvations;
            ++pending_repairs_;
            return;
        }
        repair_with(take(empty_, dynamics_.index(empty_.size())));
    }

    void on_request() {
        ++counters_.requests;
        const auto& code = cfg_.method;
        switch (code.scheme) {
        case Scheme::SimpleCaching: {
            if (!storage_.empty()) {
                const Node& req = empty_[dynamics_.index(empty_.size())];
                const double cost = fetch(req, 1);
                if (measuring_) reconstruction_ += cost;
                return;
            }
            // cache lost: the requester downloads from the base station and keeps the file
            const Node req = take(empty_, dynamics_.index(empty_.size()));
            ++counters_.bs_downloads;
            if (measuring_) {
                reconstruction_ += base_station(req);
                ++cache_creations_;
            }
            storage_.push_back(req);
            return;
        }
        case Scheme::Replication: {
            const Node& req = empty_[dynamics_.index(empty_.size())];
            const double cost = code.alpha * fetch(req, code.k);
            if (measuring_) reconstruction_ += cost;
            return;
        }
        case Scheme::MSR:
        case Scheme::MBR: {
            const std::size_t who = dynamics_.index(storage_.size() + empty_.size());
            double cost = 0.0;
            if (who < storage_.size())
                cost = code.alpha * fetch(storage_[who], code.k - 1, who);
            else
                cost = code.alpha * fetch(empty_[who - storage_.size()], code.k);
            if (measuring_) reconstruction_ += cost;
            return;
        }
        }
    }

    const SimConfig& cfg_;
    const SystemConfig& sys_;
    const GeometryTable& geom_;
    Random dynamics_;
    Random placement_;
    std::vector<Node> storage_;
    std::vector<Node> empty_;
    std::vector<double> scratch_;
    SimCounters counters_;
    double reconstruction_ = 0.0;
    double repair_ = 0.0;
    std::uint64_t cache_creations_ = 0;
    int pending_repairs_ = 0;
    bool measuring_ = false;
};

inline void check(const SimConfig& cfg, const GeometryTable& geom) {
    validate(cfg.system);
    if (!(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon))
        throw ConfigError("horizon must be > 0");
    if (!(cfg.warmup >= 0.0 && cfg.warmup < 1.0)) throw ConfigError("warmup must lie in [0, 1)");
    const auto& code = cfg.method;
    const auto rebuilt = make_code(code.scheme, code.n, code.k, code.d);
    if (!(rebuilt == code)) throw FeasibilityError("method parameters are inconsistent");
    if (code.scheme != Scheme::SimpleCaching && !(code.n < cfg.system.m))
        throw DomainError("coded methods need n < m");
    if (geom.n_max < code.n) throw DomainError("geometry table does not cover the method's n");
    if (cfg.fidelity == Fidelity::ChainLevel &&
        (geom.r != cfg.system.r || geom.gamma_d2d != cfg.system.gamma_d2d ||
         geom.v != cfg.system.v || geom.gamma_bs != cfg.system.gamma_bs))
        throw DomainError("geometry table was built for a different configuration");
}

} // namespace sim_detail

/// One seeded run against a prebuilt geometry table.
inline SimResult simulate(const SimConfig& cfg, const GeometryTable& geom) {
    sim_detail::check(cfg, geom);
    return sim_detail::Run(cfg, geom).execute();
}

inline SimResult simulate(const SimConfig& cfg) {
    return simulate(cfg, build_geometry_table(cfg.system, std::max(cfg.method.n, 1)));
}

/// Seed of replication `index` derived from a base seed.
inline std::uint64_t replication_seed(std::uint64_t base, std::size_t index) {
    return sim_detail::stream_seed(base, 0x5eed0000ULL + index);
}

/// Runs one simulation per seed (concurrently) and aggregates: component
/// means over replications, ci95 from the t distribution, counters summed.
inline SimResult replicate(const SimConfig& cfg, std::span<const std::uint64_t> seeds,
                           const GeometryTable& geom) {
    if (seeds.size() < 2) throw ConfigError("replicate needs at least 2 replications");
    sim_detail::check(cfg, geom);
    std::vector<SimResult> runs(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t i) {
        SimConfig c = cfg;
        c.seed = seeds[i];
        runs[i] = sim_detail::Run(c, geom).execute();
    });

    const double count = static_cast<double>(runs.size());
    SimResult out = runs.front();
    out.seed = cfg.seed;
    out.replications = static_cast<int>(runs.size());
    out.reconstruction = out.repair = out.storage = out.mean_population = 0.0;
    out.counters = {};
    out.final_population = 0;
    out.initial_population = 0;
    for (const auto& r : runs) {
        out.reconstruction += r.reconstruction / count;
        out.repair += r.repair / count;
        out.storage += r.storage / count;
        out.mean_population += r.mean_population / count;
        out.counters += r.counters;
        out.initial_population += r.initial_population;
        out.final_population += r.final_population;
        out.min_storage = std::min(out.min_storage, r.min_storage);
        out.max_storage = std::max(out.max_storage, r.max_storage);
    }
    out.mean_total = out.reconstruction + out.repair + out.storage;

    double ss = 0.0;
    for (const auto& r : runs) ss += (r.mean_total - out.mean_total) * (r.mean_total - out.mean_total);
    const double sd = std::sqrt(ss / (count - 1.0));
    const boost::math::students_t dist(count - 1.0);
    out.ci95_halfwidth = boost::math::quantile(dist, 0.975) * sd / std::sqrt(count);
    return out;
}

inline SimResult replicate(const SimConfig& cfg, std::size_t n_reps, const GeometryTable& geom) {
    std::vector<std::uint64_t> seeds(n_reps);
    for (std::size_t i = 0; i < n_reps; ++i) seeds[i] = replication_seed(cfg.seed, i);
    return replicate(cfg, seeds, geom);
}

inline SimResult replicate(const SimConfig& cfg, std::size_t n_reps) {
    return replicate(cfg, n_reps, build_geometry_table(cfg.system, std::max(cfg.method.n, 1)));
}

} // namespace d2dcache
