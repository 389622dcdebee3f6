#pragma once

// Acceptance checks against the published anchors: the two savings tables,
// the Poisson tail, operator-gain levels, optimal-parameter patterns, the
// geometry oracles, simulator agreement, code identities and the caching
// chain. Shared by the acceptance test binary and `d2dcache verify`.

#include "d2dcache/codes.hpp"
#include "d2dcache/config.hpp"
#include "d2dcache/cost_model.hpp"
#include "d2dcache/geometry.hpp"
#include "d2dcache/markov.hpp"
#include "d2dcache/optimizer.hpp"
#include "d2dcache/parallel.hpp"
#include "d2dcache/serialization.hpp"
#include "d2dcache/simulator.hpp"
#include "d2dcache/verification/sampling.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace d2dcache::verification {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

struct AcceptanceOptions {
    double sim_horizon = 1e4;            ///< lifetimes per simulation run
    std::size_t sim_replications = 8;    ///< independent runs averaged per point
    std::uint64_t seed = 20170501;
    std::size_t geometry_draws = 2'000'000;
    int random_link_tuples = 20;
};

namespace acceptance_detail {

inline SystemConfig reference_setting(double sigma, double omega, double v = 20.0) {
    SystemConfig cfg;
    cfg.m = 100.0;
    cfg.lambda = 1.0;
    cfg.r = 1.0;
    cfg.gamma_bs = 2.0;
    cfg.gamma_d2d = 4.0;
    cfg.v = v;
    cfg.sigma = sigma;
    cfg.omega = omega;
    cfg.theta = 1.0;
    return cfg;
}

inline const GeometryTable& reference_table(double v = 20.0) {
    static const GeometryTable t20 = build_geometry_table(reference_setting(2.0, 1e-2, 20.0), 6);
    static const GeometryTable t10 = build_geometry_table(reference_setting(2.0, 1e-2, 10.0), 6);
    return v == 10.0 ? t10 : t20;
}

inline std::string fmt(double x, int precision = 4) {
    std::ostringstream os;
    os.precision(precision);
    os << x;
    return os.str();
}

inline std::string tuple_str(const CodeSpec& c) {
    return "(" + std::to_string(c.n) + "," + std::to_string(c.k) + "," + std::to_string(c.d) + ")";
}

} // namespace acceptance_detail

/// Best-method savings for sigma = 2 against the published table.
inline CriterionResult check_savings_table_sigma2() {
    using namespace acceptance_detail;
    struct Row { double log_omega; double savings_pct; Scheme winner; };
    constexpr std::array<Row, 8> rows{{{-3.5, 41.1, Scheme::MBR},
                                       {-3.0, 80.1, Scheme::MSR},
                                       {-2.5, 92.3, Scheme::MSR},
                                       {-2.0, 96.2, Scheme::MSR},
                                       {-1.5, 97.3, Scheme::MSR},
                                       {-1.0, 97.4, Scheme::MSR},
                                       {-0.5, 96.7, Scheme::MSR},
                                       {0.0, 96.1, Scheme::Replication}}};
    CriterionResult res{1, "savings table, sigma=2 (best method vs simple caching)", true, ""};
    int winners = 0;
    double worst = 0.0;
    for (const auto& row : rows) {
        const auto cfg = reference_setting(2.0, std::pow(10.0, row.log_omega));
        const auto cmp = best_method(cfg, SearchRanges{}, reference_table());
        const double pct = 100.0 * cmp.savings_vs_simple;
        worst = std::max(worst, std::abs(pct - row.savings_pct));
        if (cmp.winner == row.winner) ++winners;
        res.detail += fmt(row.log_omega, 2) + ":" + fmt(pct, 4) + "%/" +
                      std::string(to_string(cmp.winner)) + " ";
    }
    res.passed = worst <= 1.5 && winners >= 7;
    res.detail += "| max dev " + fmt(worst, 3) + "pp, winners " + std::to_string(winners) + "/8";
    return res;
}

/// MSR-versus-replication savings for sigma = 100.
inline CriterionResult check_savings_table_sigma100() {
    using namespace acceptance_detail;
    constexpr std::array<std::pair<double, double>, 5> rows{
        {{-2.0, 35.8}, {-1.5, 35.1}, {-1.0, 33.0}, {-0.5, 26.9}, {0.0, 16.9}}};
    CriterionResult res{2, "savings table, sigma=100 (MSR vs replication)", true, ""};
    double worst = 0.0;
    for (const auto& [lw, expected] : rows) {
        const auto cfg = reference_setting(100.0, std::pow(10.0, lw));
        const auto rep = optimize_replication(cfg, SearchRanges{}, reference_table());
        const auto msr = optimize_regenerating(cfg, Scheme::MSR, SearchRanges{}, reference_table());
        const double pct = 100.0 * (1.0 - msr.cost.total / rep.cost.total);
        worst = std::max(worst, std::abs(pct - expected));
        res.detail += fmt(lw, 2) + ":" + fmt(pct, 4) + "% ";
    }
    res.passed = worst <= 1.5;
    res.detail += "| max dev " + fmt(worst, 3) + "pp";
    return res;
}

inline CriterionResult check_poisson_tail() {
    const double p = poisson_tail_at_or_below(100.0, 6);
    return {3, "Poisson tail P(N <= 6 | m = 100)", p >= 3.7e-35 && p <= 8.3e-35,
            "value " + acceptance_detail::fmt(p, 6) + ", band [3.7e-35, 8.3e-35]"};
}

/// log10 G for best MSR at omega = 0.1, v = 20 and the v = 10 -> 20 lift.
inline CriterionResult check_operator_gain() {
    using namespace acceptance_detail;
    CriterionResult res{4, "operator gain, sigma=100, theta=1", true, ""};
    auto log_gain = [](double omega, double v) {
        const auto cfg = reference_setting(100.0, omega, v);
        const auto& geom = reference_table(v);
        const auto msr = optimize_regenerating(cfg, Scheme::MSR, SearchRanges{}, geom);
        return std::log10(operator_gain(cfg, msr.cost, geom.bs_cost));
    };
    const double anchor = log_gain(0.1, 20.0);
    res.passed = std::abs(anchor - 1.5) <= 0.2;
    res.detail = "log10 G(0.1, v=20) = " + fmt(anchor, 4);
    for (double omega : {1e-2, 1e-1}) {
        const double lift = log_gain(omega, 20.0) - log_gain(omega, 10.0);
        res.passed = res.passed && std::abs(lift - 0.5) <= 0.15;
        res.detail += "; lift(" + fmt(omega, 2) + ") = " + fmt(lift, 4);
    }
    return res;
}

inline std::vector<double> log_grid(double lo, double hi, int points) {
    std::vector<double> g;
    for (int i = 0; i < points; ++i)
        g.push_back(points == 1 ? lo : lo + (hi - lo) * i / (points - 1));
    return g;
}

inline CriterionResult check_optimal_parameters() {
    using namespace acceptance_detail;
    CriterionResult res{5, "optimal-parameter patterns", true, ""};

    bool rep_six = true;
    for (double lw : log_grid(-3.0, 0.0, 25)) {
        const auto cfg = reference_setting(0.01, std::pow(10.0, lw));
        const auto rep = optimize_replication(cfg, SearchRanges{}, reference_table());
        if (rep.best.n != 6) {
            rep_six = false;
            res.detail += "sigma=0.01 log10w=" + fmt(lw, 3) + " n*=" + std::to_string(rep.best.n) + "; ";
        }
    }

    bool parity = true;
    for (double lw : {-1.0, -0.5}) {
        const auto cfg = reference_setting(100.0, std::pow(10.0, lw));
        const auto msr = optimize_regenerating(cfg, Scheme::MSR, SearchRanges{}, reference_table());
        const bool ok = msr.best.n == 6 && msr.best.k == 5 && msr.best.d == 5;
        parity = parity && ok;
        res.detail += "sigma=100 log10w=" + fmt(lw, 2) + " MSR* " + tuple_str(msr.best) + "; ";
    }

    int d_eq_k = 0;
    const auto grid = log_grid(-4.0, 0.0, 33);
    for (double lw : grid) {
        const auto cfg = reference_setting(100.0, std::pow(10.0, lw));
        const auto msr = optimize_regenerating(cfg, Scheme::MSR, SearchRanges{}, reference_table());
        if (msr.best.d == msr.best.k) ++d_eq_k;
    }
    const double frac = static_cast<double>(d_eq_k) / static_cast<double>(grid.size());
    res.passed = rep_six && parity && frac >= 0.9;
    res.detail += std::string("replication n*=6 everywhere: ") + (rep_six ? "yes" : "no") +
                  "; d=k fraction " + fmt(frac, 3);
    return res;
}

inline CriterionResult check_geometry_oracles(const AcceptanceOptions& opt) {
    using namespace acceptance_detail;
    CriterionResult res{6, "geometry oracles", true, ""};
    const double l112 = link_cost(1, 1, 1.0, 2.0);
    const double bs = base_station_cost(1.0, 20.0, 2.0);
    const bool exact_ok = std::abs(l112 - two_point_second_moment(1.0)) <= 1e-6 &&
                          std::abs(bs - base_station_second_moment(1.0, 20.0)) <= 1e-6;
    res.detail = "L(1,1;r=1,G=2)=" + fmt(l112, 12) + " bs(1,20,2)=" + fmt(bs, 12);

    struct Tuple { int q, n; double r, gamma; };
    std::mt19937_64 gen(opt.seed);
    std::vector<Tuple> tuples;
    for (int i = 0; i < opt.random_link_tuples; ++i) {
        const int n = 1 + static_cast<int>(gen() % 6);
        const int q = 1 + static_cast<int>(gen() % static_cast<std::uint64_t>(n));
        const double r = 0.5 + 1.5 * std::generate_canonical<double, 53>(gen);
        const double gamma = (gen() % 2 == 0) ? 2.0 : 4.0;
        tuples.push_back({q, n, r, gamma});
    }
    std::vector<double> rel(tuples.size());
    parallel_for(tuples.size(), [&](std::size_t i) {
        const auto& t = tuples[i];
        const double quad = link_cost(t.q, t.n, t.r, t.gamma);
        const double mc = sampled_link_cost(t.q, t.n, t.r, t.gamma, opt.geometry_draws, opt.seed + 1 + i);
        rel[i] = std::abs(quad - mc) / mc;
    });
    double worst = 0.0;
    for (double e : rel) worst = std::max(worst, e);
    res.passed = exact_ok && worst <= 0.01;
    res.detail += "; worst sampled rel dev " + fmt(worst, 3) + " over " +
                  std::to_string(tuples.size()) + " tuples";
    return res;
}

/// Simulated cost rates versus the closed forms, and spatial versus chain-level.
inline CriterionResult check_simulator_agreement(const AcceptanceOptions& opt) {
    using namespace acceptance_detail;
    CriterionResult res{7, "simulator vs analytic (5%) and spatial vs chain (3%)", true, ""};
    double worst_analytic = 0.0;
    double worst_fidelity = 0.0;
    for (double omega : {1e-3, 1e-2, 1e-1}) {
        const auto cfg = reference_setting(2.0, omega);
        const auto& geom = reference_table();
        const auto cmp = best_method(cfg, SearchRanges{}, geom);
        for (const CostBreakdown* analytic :
             {&cmp.simple, &cmp.replication.cost, &cmp.msr.cost, &cmp.mbr.cost}) {
            SimConfig sc;
            sc.system = cfg;
            sc.method = analytic->method;
            sc.horizon = opt.sim_horizon;
            sc.seed = opt.seed;
            sc.fidelity = Fidelity::ChainLevel;
            const auto chain = replicate(sc, opt.sim_replications, geom);
            sc.fidelity = Fidelity::Spatial;
            const auto spatial = replicate(sc, opt.sim_replications, geom);
            const double dev_a = std::abs(chain.mean_total - analytic->total) / analytic->total;
            const double dev_f = std::abs(spatial.mean_total - chain.mean_total) / chain.mean_total;
            worst_analytic = std::max(worst_analytic, dev_a);
            worst_fidelity = std::max(worst_fidelity, dev_f);
            if (dev_a > 0.05 || dev_f > 0.03)
                res.detail += std::string(to_string(sc.method.scheme)) + tuple_str(sc.method) +
                              "@" + fmt(omega, 2) + " analytic " + fmt(dev_a, 3) + " fidelity " +
                              fmt(dev_f, 3) + "; ";
        }
    }
    res.passed = worst_analytic <= 0.05 && worst_fidelity <= 0.03;
    res.detail += "worst analytic dev " + fmt(worst_analytic, 3) + ", worst fidelity dev " +
                  fmt(worst_fidelity, 3);
    return res;
}

inline CriterionResult check_code_identities() {
    CriterionResult res{8, "regenerating-code identities, 1 <= k <= d <= 16", true, ""};
    int violations = 0;
    for (int d = 1; d <= 16; ++d)
        for (int k = 1; k <= d; ++k) {
            const auto msr = msr_point(k, d);
            const auto mbr = mbr_point(k, d);
            const bool ok = msr.alpha <= mbr.alpha && mbr.gamma <= msr.gamma &&
                            mbr.alpha == mbr.gamma && msr.gamma == d * msr.beta &&
                            mbr.gamma == d * mbr.beta && (k != d || msr.gamma == 1.0);
            if (!ok) ++violations;
        }
    res.passed = violations == 0;
    res.detail = std::to_string(violations) + " violations over 136 (k,d) pairs";
    return res;
}

inline CriterionResult check_caching_chain() {
    const auto state = simple_caching_steady_state(100.0, 0.01, 1.0, 300);
    const double residual = zeta_recursion_residual(state);
    const double tv = population_total_variation(state);
    return {9, "simple-caching chain at j_max=300", residual < 1e-8 && tv <= 1e-6,
            "zeta residual " + acceptance_detail::fmt(residual, 3) + ", population TV " +
                acceptance_detail::fmt(tv, 3)};
}

inline std::vector<std::function<CriterionResult()>> acceptance_checks(const AcceptanceOptions& opt) {
    return {check_savings_table_sigma2,
            check_savings_table_sigma100,
            check_poisson_tail,
            check_operator_gain,
            check_optimal_parameters,
            [opt] { return check_geometry_oracles(opt); },
            [opt] { return check_simulator_agreement(opt); },
            check_code_identities,
            check_caching_chain};
}

inline std::string format_line(const CriterionResult& r) {
    return std::string(r.passed ? "PASS" : "FAIL") + " [" + std::to_string(r.id) + "] " + r.name +
           " -- " + r.detail;
}

} // namespace d2dcache::verification
