#pragma once

#include "d2dcache/errors.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace d2dcache {

/// Cluster and economic parameters shared by every cost and simulation routine.
///
/// Rates are per unit time; the expected node lifetime is T = 1 / lambda.
/// Defaults are the setting used for the cost-versus-popularity experiments.
struct SystemConfig {
    double m = 100.0;        ///< expected node count
    double lambda = 1.0;     ///< node failure (departure) rate
    double omega = 1e-2;     ///< per-node request rate
    double r = 1.0;          ///< cluster radius
    double v = 20.0;         ///< base-station distance from cluster center
    double gamma_d2d = 4.0;  ///< D2D pathloss exponent
    double gamma_bs = 2.0;   ///< base-station downlink pathloss exponent
    double sigma = 2.0;      ///< cost of storing one unit of data
    double theta = 1.0;      ///< operator weight on D2D transmission cost

    double lifetime() const noexcept { return 1.0 / lambda; }

    bool operator==(const SystemConfig&) const = default;
};

/// Throws ConfigError for hard violations and returns soft warnings
/// (currently only omega >= lambda, which is outside the modeled regime).
inline std::vector<std::string> validate(const SystemConfig& cfg) {
    auto finite = [](double x) { return std::isfinite(x); };
    if (!(finite(cfg.m) && cfg.m > 1.0)) throw ConfigError("m must be > 1");
    if (!(finite(cfg.lambda) && cfg.lambda > 0.0)) throw ConfigError("lambda must be > 0");
    if (!(finite(cfg.omega) && cfg.omega >= 0.0)) throw ConfigError("omega must be >= 0");
    if (!(finite(cfg.r) && cfg.r > 0.0)) throw ConfigError("r must be > 0");
    if (!(finite(cfg.v) && cfg.v > cfg.r)) throw ConfigError("v must be > r");
    if (!(finite(cfg.gamma_d2d) && cfg.gamma_d2d >= 1.0))
        throw ConfigError("gamma_d2d must be >= 1");
    if (!(finite(cfg.gamma_bs) && cfg.gamma_bs >= 1.0))
        throw ConfigError("gamma_bs must be >= 1");
    if (!(finite(cfg.sigma) && cfg.sigma >= 0.0)) throw ConfigError("sigma must be >= 0");
    if (!(finite(cfg.theta) && cfg.theta >= 0.0)) throw ConfigError("theta must be >= 0");

    std::vector<std::string> warnings;
    if (cfg.omega >= cfg.lambda)
        warnings.emplace_back("omega >= lambda: outside the omega < lambda regime");
    return warnings;
}

} // namespace d2dcache
