#pragma once

// Stochastic-geometry kernel: circle intersection areas and the distance
// moment integrals behind every transmission cost.
//
// Nodes are uniform in a disk of radius r. A point at distance t from the
// center sees the disk fraction p(x) = A(x, r, t) / (pi r^2) within radius x,
// so its q-th nearest of n nodes lies beyond x with probability
//   sum_{i<q} C(n,i) p^i (1-p)^(n-i).
// Integrating Gamma x^(Gamma-1) against that tail gives the expected Gamma-th
// power of the neighbor distance; averaging over t with density 2t/r^2 gives
// the link cost L(q, n).

#include "d2dcache/config.hpp"
#include "d2dcache/errors.hpp"
#include "d2dcache/parallel.hpp"
#include "d2dcache/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <utility>
#include <string>
#include <vector>

namespace d2dcache {

namespace geometry_detail {

inline double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }
inline double sqrt_nonneg(double x) { return std::sqrt(std::max(x, 0.0)); }

// Area of the circular segment of a radius-x circle cut by a chord of length mu.
inline double eta(double x, double mu) {
    const double h = 0.5 * mu + x;
    return x * x * std::asin(clamp_unit(mu / (2.0 * x))) -
           sqrt_nonneg(h * (h - mu) * (h - x) * (h - x));
}

inline constexpr quad::Tolerance kOuterTolerance{1e-8, 1e-12, 4000};
inline constexpr quad::Tolerance kInnerTolerance{1e-9, 1e-13, 4000};

inline void check_rank(int n, int q) {
    if (n < 1) throw DomainError("node count n must be >= 1");
    if (q < 1 || q > n)
        throw DomainError("rank q=" + std::to_string(q) + " must satisfy 1 <= q <= n=" +
                          std::to_string(n));
}

inline void check_offset(double r, double t) {
    if (!(r > 0.0)) throw DomainError("radius r must be > 0");
    if (!(t >= 0.0 && t <= r)) throw DomainError("offset t must satisfy 0 <= t <= r");
}

// P(fewer than q of n i.i.d. nodes fall in a region of probability p).
inline double binomial_lower_tail(int n, int q, double p) {
    p = std::clamp(p, 0.0, 1.0);
    const double miss = 1.0 - p;
    double coeff = 1.0;
    double sum = 0.0;
    for (int i = 0; i < q; ++i) {
        sum += coeff * std::pow(p, i) * std::pow(miss, n - i);
        coeff = coeff * (n - i) / (i + 1);
    }
    return std::clamp(sum, 0.0, 1.0);
}

} // namespace geometry_detail

/// Intersection area of two circles with radii R and r whose centers are v
/// apart. Symmetric in (R, r).
inline double circle_intersection_area(double R, double r, double v) {
    using namespace geometry_detail;
    if (!(R > 0.0) || !(r > 0.0)) throw DomainError("circle radii must be > 0");
    if (!(v >= 0.0)) throw DomainError("center separation v must be >= 0");
    if (r > R) std::swap(R, r);

    constexpr double pi = std::numbers::pi;
    if (v <= R - r) return pi * r * r;
    if (v > r + R) return 0.0;

    const double mu =
        sqrt_nonneg((r + R - v) * (r - R + v) * (-r + R + v) * (r + R + v)) / v;
    const double area = v <= std::sqrt(R * R - r * r)
                            ? pi * r * r - eta(r, mu) + eta(R, mu)
                            : eta(r, mu) + eta(R, mu);
    return std::clamp(area, 0.0, pi * r * r);
}

/// Fraction of a radius-r disk lying within distance x of a point at distance
/// t from the disk center.
inline double coverage_probability(double x, double r, double t) {
    geometry_detail::check_offset(r, t);
    if (!(x >= 0.0)) throw DomainError("coverage radius x must be >= 0");
    if (x == 0.0) return 0.0;
    if (x >= r + t) return 1.0;
    const double a = circle_intersection_area(std::max(x, r), std::min(x, r), t);
    return std::clamp(a / (std::numbers::pi * r * r), 0.0, 1.0);
}

/// Probability that the q-th nearest of n uniform nodes is farther than x
/// from a point at offset t.
inline double neighbor_distance_ccdf(double x, int n, int q, double r, double t) {
    return geometry_detail::binomial_lower_tail(n, q, coverage_probability(x, r, t));
}

/// E[dist^gamma] from a point at offset t to its q-th nearest of n nodes.
inline double expected_neighbor_distance_power(int n, int q, double r, double t, double gamma) {
    using namespace geometry_detail;
    check_rank(n, q);
    check_offset(r, t);
    if (!(gamma >= 1.0)) throw DomainError("pathloss exponent must be >= 1");

    auto integrand = [&](double x) {
        const double weight = gamma == 1.0 ? 1.0 : std::pow(x, gamma - 1.0);
        return weight * neighbor_distance_ccdf(x, n, q, r, t);
    };
    const auto pts = quad::breakpoints(
        0.0, r + t,
        {r - t, std::sqrt(r * r - t * t), r, std::sqrt(r * r + t * t)});
    return gamma * quad::integrate(integrand, pts, kInnerTolerance).value;
}

/// E[dist] from a point at offset t to its q-th nearest of n nodes.
inline double expected_neighbor_distance(int n, int q, double r, double t) {
    return expected_neighbor_distance_power(n, q, r, t, 1.0);
}

/// L(q, n): expected gamma-th power distance from a uniform point in the disk
/// to its q-th nearest of n uniform storage nodes.
inline double link_cost(int q, int n, double r, double gamma) {
    using namespace geometry_detail;
    check_rank(n, q);
    if (!(r > 0.0)) throw DomainError("radius r must be > 0");
    if (!(gamma >= 1.0)) throw DomainError("pathloss exponent must be >= 1");

    auto integrand = [&](double t) {
        return t * expected_neighbor_distance_power(n, q, r, std::min(t, r), gamma);
    };
    return 2.0 / (r * r) * quad::integrate(integrand, 0.0, r, kOuterTolerance).value;
}

/// Expected gamma_bs-th power distance from a uniform point in the cluster to
/// a base station v away from its center.
inline double base_station_cost(double r, double v, double gamma_bs) {
    using namespace geometry_detail;
    if (!(r > 0.0)) throw DomainError("radius r must be > 0");
    if (!(v > r)) throw DomainError("base station must lie outside the cluster (v > r)");
    if (!(gamma_bs >= 1.0)) throw DomainError("pathloss exponent must be >= 1");

    auto integrand = [&](double x) {
        const double weight = gamma_bs == 1.0 ? 1.0 : std::pow(x, gamma_bs - 1.0);
        if (x <= 0.0) return weight;
        const double covered =
            circle_intersection_area(std::max(x, r), std::min(x, r), v) / (std::numbers::pi * r * r);
        return weight * (1.0 - std::clamp(covered, 0.0, 1.0));
    };
    const auto pts = quad::breakpoints(0.0, v + r, {v - r, r, std::sqrt(v * v + r * r)});
    return gamma_bs * quad::integrate(integrand, pts, kOuterTolerance).value;
}

/// Precomputed link costs L(q, n) for 1 <= q <= n <= n_max plus the
/// base-station cost. Immutable after construction.
struct GeometryTable {
    double r = 1.0;
    double v = 20.0;
    double gamma_d2d = 4.0;
    double gamma_bs = 2.0;
    double bs_cost = 0.0;
    int n_max = 0;
    std::vector<double> entries;  // row n holds q = 1..n, rows packed by n

    static std::size_t index(int q, int n) {
        return static_cast<std::size_t>(n - 1) * n / 2 + static_cast<std::size_t>(q - 1);
    }

    double link(int q, int n) const {
        if (n < 1 || n > n_max || q < 1 || q > n)
            throw DomainError("geometry table has no entry for (q=" + std::to_string(q) +
                              ", n=" + std::to_string(n) + ")");
        return entries[index(q, n)];
    }

    bool operator==(const GeometryTable&) const = default;
};

inline GeometryTable build_geometry_table(const SystemConfig& cfg, int n_max) {
    if (n_max < 1) throw DomainError("n_max must be >= 1");
    GeometryTable table;
    table.r = cfg.r;
    table.v = cfg.v;
    table.gamma_d2d = cfg.gamma_d2d;
    table.gamma_bs = cfg.gamma_bs;
    table.n_max = n_max;
    table.entries.resize(GeometryTable::index(n_max, n_max) + 1);

    std::vector<std::pair<int, int>> pairs;
    for (int n = 1; n <= n_max; ++n)
        for (int q = 1; q <= n; ++q) pairs.emplace_back(q, n);
    parallel_for(pairs.size(), [&](std::size_t i) {
        const auto [q, n] = pairs[i];
        table.entries[GeometryTable::index(q, n)] = link_cost(q, n, cfg.r, cfg.gamma_d2d);
    });
    table.bs_cost = base_station_cost(cfg.r, cfg.v, cfg.gamma_bs);
    return table;
}

} // namespace d2dcache
