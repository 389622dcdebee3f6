#pragma once

// Independent Monte Carlo and textbook-formula oracles for the geometry
// kernel. Nothing here calls into geometry.hpp; these estimate the same
// quantities by direct sampling of uniform points in the disk.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace d2dcache::verification {

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return std::generate_canonical<double, 53>(engine_); }

    /// Uniform point in a disk of the given radius centered at the origin.
    std::pair<double, double> in_disk(double radius) {
        const double rho = radius * std::sqrt(uniform());
        const double phi = 2.0 * std::numbers::pi * uniform();
        return {rho * std::cos(phi), rho * std::sin(phi)};
    }

private:
    std::mt19937_64 engine_;
};

/// Lens area from the law-of-cosines form (center distance d).
inline double lens_area(double R, double r, double d) {
    if (d >= R + r) return 0.0;
    if (d <= std::abs(R - r)) return std::numbers::pi * std::pow(std::min(R, r), 2);
    const double a = r * r * std::acos((d * d + r * r - R * R) / (2.0 * d * r));
    const double b = R * R * std::acos((d * d + R * R - r * r) / (2.0 * d * R));
    const double c = 0.5 * std::sqrt((-d + r + R) * (d + r - R) * (d - r + R) * (d + r + R));
    return a + b - c;
}

/// Dart-throwing estimate of the intersection area: uniform darts in the
/// smaller circle, counted when they also land in the larger one.
inline double dart_intersection_area(double R, double r, double v, std::size_t darts,
                                     std::uint64_t seed) {
    Sampler s(seed);
    const double small = std::min(R, r);
    const double big = std::max(R, r);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < darts; ++i) {
        auto [x, y] = s.in_disk(small);
        x += v;
        if (x * x + y * y <= big * big) ++hits;
    }
    return std::numbers::pi * small * small * static_cast<double>(hits) / static_cast<double>(darts);
}

/// Fraction of uniform disk points within x of the point (t, 0).
inline double dart_coverage(double x, double r, double t, std::size_t darts, std::uint64_t seed) {
    Sampler s(seed);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < darts; ++i) {
        const auto [px, py] = s.in_disk(r);
        const double dx = px - t;
        if (dx * dx + py * py <= x * x) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(darts);
}

/// Mean of dist^gamma from (t, 0) to the q-th nearest of n uniform nodes.
inline double sampled_neighbor_power(int n, int q, double r, double t, double gamma,
                                     std::size_t draws, std::uint64_t seed) {
    Sampler s(seed);
    std::vector<double> d2(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
        for (int j = 0; j < n; ++j) {
            const auto [x, y] = s.in_disk(r);
            d2[j] = (x - t) * (x - t) + y * y;
        }
        std::nth_element(d2.begin(), d2.begin() + (q - 1), d2.end());
        sum += std::pow(d2[q - 1], 0.5 * gamma);
    }
    return sum / static_cast<double>(draws);
}

/// Same with a uniformly placed reference point: estimates L(q, n).
inline double sampled_link_cost(int q, int n, double r, double gamma, std::size_t draws,
                                std::uint64_t seed) {
    Sampler s(seed);
    std::vector<double> d2(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
        const auto [rx, ry] = s.in_disk(r);
        for (int j = 0; j < n; ++j) {
            const auto [x, y] = s.in_disk(r);
            d2[j] = (x - rx) * (x - rx) + (y - ry) * (y - ry);
        }
        std::nth_element(d2.begin(), d2.begin() + (q - 1), d2.end());
        sum += std::pow(d2[q - 1], 0.5 * gamma);
    }
    return sum / static_cast<double>(draws);
}

/// Mean of dist^gamma from a uniform disk point to (v, 0).
inline double sampled_base_station_cost(double r, double v, double gamma, std::size_t draws,
                                        std::uint64_t seed) {
    Sampler s(seed);
    double sum = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
        const auto [x, y] = s.in_disk(r);
        sum += std::pow((x - v) * (x - v) + y * y, 0.5 * gamma);
    }
    return sum / static_cast<double>(draws);
}

/// E|X - Y|^2 for X, Y independent uniform in a radius-r disk, plus the
/// second moment to an external point: both follow from E|X|^2 = r^2 / 2.
inline double two_point_second_moment(double r) { return r * r; }
inline double base_station_second_moment(double r, double v) { return v * v + 0.5 * r * r; }

} // namespace d2dcache::verification
