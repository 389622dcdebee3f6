#pragma once

// Steady state of the cluster population chain (M/M/inf, Poisson(m)) and of
// the two-level simple-caching chain.
//
// Simple-caching states are (x, y): x in {0, 1} caching nodes and y empty
// nodes, population j = x + y. Transitions, all rates in units of lambda
// except requests:
//   (x, y) -> (x, y+1)    m lambda     arrival
//   (x, y) -> (x, y-1)    y lambda     an empty node leaves
//   (1, y) -> (0, y)      lambda       the caching node leaves
//   (0, y) -> (1, y-1)    y omega      a request goes to the base station and
//                                      the requester becomes the cache
// The uncached row (x = 0) carries pi_j - zeta_j and the cached row (x = 1)
// carries zeta_j, indexed by population j; zeta_0 = 0.

#include "d2dcache/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace d2dcache {

/// Poisson(m) pmf at j, evaluated in log space.
inline double poisson_steady_state(double m, int j) {
    if (!(m > 0.0)) throw DomainError("m must be > 0");
    if (j < 0) throw DomainError("state index must be >= 0");
    return std::exp(j * std::log(m) - m - std::lgamma(j + 1.0));
}

/// P(population <= n) under Poisson(m), accumulated with log-sum-exp.
inline double poisson_tail_at_or_below(double m, int n) {
    if (!(m > 0.0)) throw DomainError("m must be > 0");
    if (n < 0) throw DomainError("state index must be >= 0");
    std::vector<double> logs;
    logs.reserve(static_cast<std::size_t>(n) + 1);
    double peak = -std::numeric_limits<double>::infinity();
    for (int j = 0; j <= n; ++j) {
        logs.push_back(j * std::log(m) - m - std::lgamma(j + 1.0));
        peak = std::max(peak, logs.back());
    }
    double sum = 0.0;
    for (double l : logs) sum += std::exp(l - peak);
    return std::min(1.0, std::exp(peak + std::log(sum)));
}

/// Truncation index with Poisson mass beyond it far below double resolution.
inline int default_truncation(double m) {
    return static_cast<int>(std::ceil(m + 20.0 * std::sqrt(m)));
}

struct PopulationDistribution {
    double m = 0.0;
    std::vector<double> probs;  ///< pi(j), j = 0..j_max, renormalized

    double mean() const {
        double s = 0.0;
        for (std::size_t j = 0; j < probs.size(); ++j) s += j * probs[j];
        return s;
    }
};

inline PopulationDistribution population_distribution(double m, int j_max) {
    if (j_max < 0) throw DomainError("j_max must be >= 0");
    PopulationDistribution dist;
    dist.m = m;
    dist.probs.resize(static_cast<std::size_t>(j_max) + 1);
    double total = 0.0;
    for (int j = 0; j <= j_max; ++j) total += dist.probs[j] = poisson_steady_state(m, j);
    for (double& p : dist.probs) p /= total;
    return dist;
}

struct CachingChainState {
    double m = 0.0;
    double omega = 0.0;
    double lambda = 0.0;
    int j_max = 0;
    std::vector<double> upper;  ///< uncached mass at population j: pi_j - zeta_j
    std::vector<double> lower;  ///< cached mass at population j: zeta_j

    double marginal(int j) const { return upper[j] + lower[j]; }

    double cached_mass() const {
        double s = 0.0;
        for (double z : lower) s += z;
        return s;
    }
};

namespace markov_detail {

// Uncached state at population j -> index j; cached state at population j
// (j >= 1) -> index j_max + j.
inline int uncached_index(int j) { return j; }
inline int cached_index(int j, int j_max) { return j_max + j; }

} // namespace markov_detail

/// Generator matrix Q (rows sum to zero) of the truncated simple-caching
/// chain; state ordering per markov_detail. Arrivals out of population j_max
/// are dropped.
inline Eigen::MatrixXd simple_caching_generator(double m, double omega, double lambda, int j_max) {
    using namespace markov_detail;
    const int size = 2 * j_max + 1;
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(size, size);
    auto add = [&](int from, int to, double rate) {
        if (rate == 0.0) return;
        q(from, to) += rate;
        q(from, from) -= rate;
    };
    for (int j = 0; j <= j_max; ++j) {
        // uncached, y = j empty nodes
        const int u = uncached_index(j);
        if (j < j_max) add(u, uncached_index(j + 1), m * lambda);
        if (j > 0) {
            add(u, uncached_index(j - 1), j * lambda);
            add(u, cached_index(j, j_max), j * omega);
        }
        // cached, y = j - 1 empty nodes
        if (j >= 1) {
            const int c = cached_index(j, j_max);
            const int empty = j - 1;
            if (j < j_max) add(c, cached_index(j + 1, j_max), m * lambda);
            if (empty > 0) add(c, cached_index(j - 1, j_max), empty * lambda);
            add(c, uncached_index(j - 1), lambda);
        }
    }
    return q;
}

/// Solves pi Q = 0, sum(pi) = 1 for the truncated simple-caching chain.
inline CachingChainState simple_caching_steady_state(double m, double omega, double lambda,
                                                     int j_max) {
    using namespace markov_detail;
    if (!(m > 0.0) || !(omega > 0.0) || !(lambda > 0.0))
        throw DomainError("m, omega and lambda must be > 0");
    if (j_max < m + 10.0 * std::sqrt(m))
        throw DomainError("j_max must be >= m + 10 sqrt(m)");

    const Eigen::MatrixXd q = simple_caching_generator(m, omega, lambda, j_max);
    const auto size = q.rows();
    Eigen::MatrixXd a = q.transpose();
    a.row(size - 1).setOnes();  // replace one balance equation by normalization
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(size);
    rhs(size - 1) = 1.0;

    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    const double rcond = lu.rcond();
    if (!(rcond > 1e3 * std::numeric_limits<double>::epsilon()))
        throw SolverError("simple-caching balance system is singular or ill-conditioned", rcond);
    const Eigen::VectorXd p = lu.solve(rhs);
    if (!p.allFinite()) throw SolverError("simple-caching solve produced non-finite values", rcond);

    CachingChainState state;
    state.m = m;
    state.omega = omega;
    state.lambda = lambda;
    state.j_max = j_max;
    state.upper.assign(static_cast<std::size_t>(j_max) + 1, 0.0);
    state.lower.assign(static_cast<std::size_t>(j_max) + 1, 0.0);
    for (int j = 0; j <= j_max; ++j) {
        state.upper[j] = std::max(0.0, p(uncached_index(j)));
        if (j >= 1) state.lower[j] = std::max(0.0, p(cached_index(j, j_max)));
    }
    return state;
}

/// Max over 1 <= j <= j_max - 1 of |zeta_{j+1} - rhs(j)| with
///   rhs(j) = (m/j + omega/lambda + 1) zeta_j - (m/j) zeta_{j-1} - (omega/lambda) pi_j,
/// where pi_j is the state's own population marginal.
inline double zeta_recursion_residual(const CachingChainState& s) {
    const double ratio = s.omega / s.lambda;
    double worst = 0.0;
    for (int j = 1; j + 1 <= s.j_max; ++j) {
        const double mj = s.m / j;
        const double rhs =
            (mj + ratio + 1.0) * s.lower[j] - mj * s.lower[j - 1] - ratio * s.marginal(j);
        worst = std::max(worst, std::abs(s.lower[j + 1] - rhs));
    }
    return worst;
}

/// Total-variation distance between the chain's population marginal and
/// the untruncated Poisson(m) law.
inline double population_total_variation(const CachingChainState& s) {
    double tv = 0.0;
    double covered = 0.0;
    for (int j = 0; j <= s.j_max; ++j) {
        const double pois = poisson_steady_state(s.m, j);
        covered += pois;
        tv += std::abs(s.marginal(j) - pois);
    }
    tv += std::max(0.0, 1.0 - covered);
    return 0.5 * tv;
}

/// Fraction of served requests that go to the base station: request flux out
/// of uncached states over the total request flux (the cache never requests).
inline double base_station_request_fraction(const CachingChainState& s) {
    double bs = 0.0;
    double d2d = 0.0;
    for (int j = 0; j <= s.j_max; ++j) {
        bs += j * s.omega * s.upper[j];
        if (j >= 1) d2d += (j - 1) * s.omega * s.lower[j];
    }
    return bs / (bs + d2d);
}

} // namespace d2dcache
