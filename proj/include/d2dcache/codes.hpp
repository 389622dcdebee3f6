#pragma once

#include "d2dcache/errors.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace d2dcache {

enum class Scheme { SimpleCaching, Replication, MSR, MBR };

inline std::string_view to_string(Scheme s) {
    switch (s) {
    case Scheme::SimpleCaching: return "simple";
    case Scheme::Replication: return "replication";
    case Scheme::MSR: return "msr";
    case Scheme::MBR: return "mbr";
    }
    return "unknown";
}

inline std::optional<Scheme> parse_scheme(std::string_view name) {
    if (name == "simple") return Scheme::SimpleCaching;
    if (name == "replication") return Scheme::Replication;
    if (name == "msr") return Scheme::MSR;
    if (name == "mbr") return Scheme::MBR;
    return std::nullopt;
}

/// Per-node storage and repair traffic for a unit-size file.
struct CodePoint {
    double alpha = 0.0;  ///< data stored per node
    double beta = 0.0;   ///< data sent by each repair helper
    double gamma = 0.0;  ///< total repair bandwidth, d * beta
};

/// A caching scheme with its (n, k, d) degrees and derived (alpha, beta, gamma).
/// Simple caching stores one full copy with no repairs (d = 0, beta = gamma = 0);
/// replication is k = d = 1 with full-file traffic.
struct CodeSpec {
    Scheme scheme = Scheme::SimpleCaching;
    int n = 1;
    int k = 1;
    int d = 0;
    double alpha = 1.0;
    double beta = 0.0;
    double gamma = 0.0;

    bool operator==(const CodeSpec&) const = default;
};

namespace codes_detail {
inline void check_degrees(int k, int d) {
    if (k < 1) throw FeasibilityError("reconstruction degree k must be >= 1");
    if (d < 1) throw FeasibilityError("repair degree d must be >= 1");
    if (k > d)
        throw FeasibilityError("k <= d violated (k=" + std::to_string(k) +
                               ", d=" + std::to_string(d) + ")");
}
} // namespace codes_detail

/// Minimum-storage point: alpha = 1/k, gamma = d / (k (d - k + 1)).
inline CodePoint msr_point(int k, int d) {
    codes_detail::check_degrees(k, d);
    CodePoint p;
    p.alpha = 1.0 / k;
    p.beta = 1.0 / (static_cast<double>(k) * (d - k + 1));
    p.gamma = d * p.beta;
    return p;
}

/// Minimum-bandwidth point: alpha = gamma = 2d / (k (2d - k + 1)).
inline CodePoint mbr_point(int k, int d) {
    codes_detail::check_degrees(k, d);
    CodePoint p;
    p.beta = 2.0 / (static_cast<double>(k) * (2 * d - k + 1));
    p.gamma = d * p.beta;
    p.alpha = p.gamma;
    return p;
}

/// Builds a validated CodeSpec. Replication ignores k and d; simple caching
/// ignores every degree and forces n = 1.
inline CodeSpec make_code(Scheme scheme, int n, int k = 1, int d = 1) {
    CodeSpec c;
    c.scheme = scheme;
    switch (scheme) {
    case Scheme::SimpleCaching:
        c.n = 1;
        c.k = 1;
        c.d = 0;
        c.alpha = 1.0;
        c.beta = 0.0;
        c.gamma = 0.0;
        return c;
    case Scheme::Replication:
        if (n < 2) throw FeasibilityError("replication needs n >= 2 (n=" + std::to_string(n) + ")");
        c.n = n;
        c.k = 1;
        c.d = 1;
        c.alpha = c.beta = c.gamma = 1.0;
        return c;
    case Scheme::MSR:
    case Scheme::MBR: {
        if (n < 2) throw FeasibilityError("regenerating codes need n >= 2 (n=" + std::to_string(n) + ")");
        codes_detail::check_degrees(k, d);
        if (d > n - 1)
            throw FeasibilityError("d <= n-1 violated (d=" + std::to_string(d) +
                                   ", n=" + std::to_string(n) + ")");
        const auto p = scheme == Scheme::MSR ? msr_point(k, d) : mbr_point(k, d);
        c.n = n;
        c.k = k;
        c.d = d;
        c.alpha = p.alpha;
        c.beta = p.beta;
        c.gamma = p.gamma;
        return c;
    }
    }
    throw FeasibilityError("unknown scheme");
}

} // namespace d2dcache
