// d2dcache: experiment driver for the D2D caching cost model.
//
//   d2dcache geometry  [--n-max N]                   link-cost table as JSON
//   d2dcache cost      --methods LIST                analytic cost sweep (CSV)
//   d2dcache optimize                                optimal parameters per omega (CSV)
//   d2dcache simulate  [--fidelity chain|spatial]    Monte Carlo cost rates (CSV)
//   d2dcache gain      [--v F]... [--theta F]        operator gain per base-station distance (CSV)
//   d2dcache tables    [--kind best|msr-vs-replication]
//   d2dcache verify                                  acceptance checks, exit 3 on failure
//
// Exit codes: 0 ok, 1 configuration error, 2 numerical failure, 3 verification failure.

#include "d2dcache/d2dcache.hpp"
#include "d2dcache/verification/acceptance.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace d2dcache;

struct Options {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::vector<double> sigmas;
    std::vector<double> vs;
    std::optional<double> theta;
    std::optional<double> m, lambda, r, gamma_d2d, gamma_bs;
    std::string omega_grid;
    std::string methods;
    std::string fidelity;
    std::optional<double> horizon;
    std::optional<double> warmup;
    std::optional<int> reps;
    std::string replication_n;
    std::string coded_n;
    int n_max = 6;
    std::string table_kind = "best";
    bool all_candidates = false;
};

/// Fully resolved run settings: defaults, then the JSON config, then flags.
struct Settings {
    SystemConfig base;
    std::vector<double> log_omegas;
    std::vector<double> sigmas;
    std::vector<double> vs;
    std::vector<Scheme> methods;
    SearchRanges ranges;
    std::uint64_t seed = 1;
    double horizon = 1e4;
    double warmup = 0.1;
    int reps = 1;
    Fidelity fidelity = Fidelity::ChainLevel;
};

struct ExitError {
    int code;
    std::string kind;
    std::string message;
};

std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("omega grid '" + spec + "' must be LO:HI:N");
        }
    }
    if (parts.size() != 3) throw ConfigError("omega grid '" + spec + "' must be LO:HI:N");
    const double count = parts[2];
    if (!(count >= 1) || count != std::floor(count)) throw ConfigError("omega grid needs N >= 1");
    if (parts[1] < parts[0]) throw ConfigError("omega grid needs LO <= HI");
    return verification::log_grid(parts[0], parts[1], static_cast<int>(count));
}

IntRange parse_range(const std::string& spec) {
    const auto colon = spec.find(':');
    try {
        if (colon == std::string::npos) {
            const int v = std::stoi(spec);
            return {v, v};
        }
        return {std::stoi(spec.substr(0, colon)), std::stoi(spec.substr(colon + 1))};
    } catch (const std::exception&) {
        throw ConfigError("range '" + spec + "' must be LO:HI");
    }
}

std::vector<Scheme> parse_methods(const std::string& list) {
    std::vector<Scheme> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto s = parse_scheme(item);
        if (!s) throw ConfigError("unknown method '" + item + "' (expected simple, replication, msr, mbr)");
        if (std::find(out.begin(), out.end(), *s) == out.end()) out.push_back(*s);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string json_string_or(const json& doc, const char* key, const std::string& fallback) {
    if (!doc.contains(key)) return fallback;
    if (!doc.at(key).is_string()) throw ConfigError(std::string("config field '") + key + "' must be a string");
    return doc.at(key).get<std::string>();
}

std::vector<double> json_numbers(const json& doc, const char* key) {
    std::vector<double> out;
    if (!doc.contains(key)) return out;
    const auto& v = doc.at(key);
    if (v.is_number()) return {v.get<double>()};
    if (!v.is_array()) throw ConfigError(std::string("config field '") + key + "' must be a number list");
    for (const auto& e : v) {
        if (!e.is_number()) throw ConfigError(std::string("config field '") + key + "' must be a number list");
        out.push_back(e.get<double>());
    }
    return out;
}

Settings resolve(const Options& o, const std::string& default_methods, bool methods_required) {
    Settings s;
    json doc = json::object();
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) throw ConfigError("cannot open config file '" + o.config_path + "'");
        try {
            doc = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
        }
        s.base = doc.get<SystemConfig>();
    }

    if (o.m) s.base.m = *o.m;
    if (o.lambda) s.base.lambda = *o.lambda;
    if (o.r) s.base.r = *o.r;
    if (o.gamma_d2d) s.base.gamma_d2d = *o.gamma_d2d;
    if (o.gamma_bs) s.base.gamma_bs = *o.gamma_bs;
    if (o.theta) s.base.theta = *o.theta;

    s.sigmas = !o.sigmas.empty() ? o.sigmas : json_numbers(doc, "sigma_values");
    if (s.sigmas.empty()) s.sigmas = {s.base.sigma};
    s.vs = !o.vs.empty() ? o.vs : json_numbers(doc, "v_values");
    if (s.vs.empty()) s.vs = {s.base.v};
    s.base.sigma = s.sigmas.front();
    s.base.v = s.vs.front();

    s.log_omegas = parse_grid(!o.omega_grid.empty() ? o.omega_grid : json_string_or(doc, "omega_grid", "-4:0:33"));

    std::string methods = o.methods;
    if (methods.empty() && doc.contains("methods")) {
        const auto& m = doc.at("methods");
        if (m.is_string()) methods = m.get<std::string>();
        else if (m.is_array())
            for (const auto& e : m) methods += (methods.empty() ? "" : ",") + e.get<std::string>();
    }
    if (methods.empty() && !methods_required) methods = default_methods;
    s.methods = parse_methods(methods);
    if (s.methods.empty()) throw ConfigError("no methods selected (use --methods simple,replication,msr,mbr)");

    const std::string rep = !o.replication_n.empty() ? o.replication_n : json_string_or(doc, "replication_n", "");
    const std::string coded = !o.coded_n.empty() ? o.coded_n : json_string_or(doc, "coded_n", "");
    if (!rep.empty()) s.ranges.replication_n = parse_range(rep);
    if (!coded.empty()) s.ranges.coded_n = parse_range(coded);

    if (o.seed) s.seed = *o.seed;
    else if (doc.contains("seed")) s.seed = doc.at("seed").get<std::uint64_t>();
    s.horizon = o.horizon.value_or(doc.value("horizon", s.horizon));
    s.warmup = o.warmup.value_or(doc.value("warmup", s.warmup));
    s.reps = o.reps.value_or(doc.value("reps", s.reps));
    const std::string fid = !o.fidelity.empty() ? o.fidelity : json_string_or(doc, "fidelity", "chain");
    const auto parsed = parse_fidelity(fid);
    if (!parsed) throw ConfigError("fidelity must be chain or spatial");
    s.fidelity = *parsed;

    if (s.reps < 1) throw ConfigError("reps must be >= 1");
    for (double sigma : s.sigmas) {
        SystemConfig probe = s.base;
        probe.sigma = sigma;
        for (double v : s.vs) {
            probe.v = v;
            probe.omega = std::pow(10.0, s.log_omegas.front());
            validate(probe);
        }
    }
    validate(s.ranges, s.base.m);
    return s;
}

SystemConfig point(const Settings& s, double sigma, double log_omega, double v) {
    SystemConfig cfg = s.base;
    cfg.sigma = sigma;
    cfg.v = v;
    cfg.omega = std::pow(10.0, log_omega);
    return cfg;
}

GeometryTable table_for(const Settings& s, double v, int n_max) {
    SystemConfig cfg = s.base;
    cfg.v = v;
    return build_geometry_table(cfg, n_max);
}

/// Cost of `scheme` at its optimum (simple caching has nothing to optimize).
CostBreakdown optimal_cost(Scheme scheme, const SystemConfig& cfg, const SearchRanges& ranges,
                           const GeometryTable& geom) {
    switch (scheme) {
    case Scheme::SimpleCaching: return simple_caching_cost(cfg, geom);
    case Scheme::Replication: return optimize_replication(cfg, ranges, geom).cost;
    case Scheme::MSR:
    case Scheme::MBR: return optimize_regenerating(cfg, scheme, ranges, geom).cost;
    }
    throw ConfigError("unknown scheme");
}

std::vector<CostBreakdown> all_candidates(Scheme scheme, const SystemConfig& cfg,
                                          const SearchRanges& ranges, const GeometryTable& geom) {
    std::vector<CostBreakdown> out;
    switch (scheme) {
    case Scheme::SimpleCaching: out.push_back(simple_caching_cost(cfg, geom)); break;
    case Scheme::Replication:
        for (int n = ranges.replication_n.lo; n <= ranges.replication_n.hi; ++n)
            out.push_back(replication_cost(cfg, n, geom));
        break;
    case Scheme::MSR:
    case Scheme::MBR:
        for (const auto& c : optimize_regenerating(cfg, scheme, ranges, geom).frontier)
            out.push_back(regenerating_cost(cfg, c.code, geom));
        break;
    }
    return out;
}

/// Evaluates rows for every (sigma, omega) in parallel, preserving order.
template <class RowFn>
std::vector<std::string> sweep_rows(const Settings& s, RowFn&& rows_for) {
    const std::size_t count = s.sigmas.size() * s.log_omegas.size();
    std::vector<std::vector<std::string>> slots(count);
    parallel_for(count, [&](std::size_t i) {
        const double sigma = s.sigmas[i / s.log_omegas.size()];
        const double lw = s.log_omegas[i % s.log_omegas.size()];
        slots[i] = rows_for(sigma, lw);
    });
    std::vector<std::string> out;
    for (auto& rows : slots)
        for (auto& r : rows) out.push_back(std::move(r));
    return out;
}

void emit(const Options& o, const std::string& name, const std::string& body) {
    if (o.out_dir.empty()) {
        std::cout << body;
        return;
    }
    std::error_code ec;
    std::filesystem::create_directories(o.out_dir, ec);
    const auto path = std::filesystem::path(o.out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << body;
}

std::string csv(std::string_view header, const std::vector<std::string>& rows) {
    std::string body(header);
    body += '\n';
    for (const auto& r : rows) body += r + '\n';
    return body;
}

void warn(const Settings& s) {
    SystemConfig probe = s.base;
    probe.omega = std::pow(10.0, s.log_omegas.back());
    for (const auto& w : validate(probe)) std::cerr << "warning: " << w << '\n';
}

int cmd_geometry(const Options& o) {
    Settings s = resolve(o, "simple", false);
    if (o.n_max < 1) throw ConfigError("n-max must be >= 1");
    const auto table = table_for(s, s.vs.front(), o.n_max);
    emit(o, "geometry.json", json(table).dump(2) + "\n");
    return 0;
}

int cmd_cost(const Options& o) {
    const Settings s = resolve(o, "", true);
    warn(s);
    if (s.vs.size() > 1) throw ConfigError("cost takes a single --v");
    const auto geom = table_for(s, s.vs.front(), s.ranges.max_n());
    auto rows = sweep_rows(s, [&](double sigma, double lw) {
        const auto cfg = point(s, sigma, lw, s.vs.front());
        std::vector<std::string> out;
        for (Scheme scheme : s.methods) {
            if (o.all_candidates)
                for (const auto& c : all_candidates(scheme, cfg, s.ranges, geom))
                    out.push_back(cost_csv_row(c, cfg.omega, sigma));
            else
                out.push_back(cost_csv_row(optimal_cost(scheme, cfg, s.ranges, geom), cfg.omega, sigma));
        }
        return out;
    });
    emit(o, "cost.csv", csv(kCostCsvHeader, rows));
    return 0;
}

int cmd_optimize(const Options& o) {
    const Settings s = resolve(o, "simple,replication,msr,mbr", false);
    warn(s);
    if (s.vs.size() > 1) throw ConfigError("optimize takes a single --v");
    const auto geom = table_for(s, s.vs.front(), s.ranges.max_n());
    auto rows = sweep_rows(s, [&](double sigma, double lw) {
        const auto cfg = point(s, sigma, lw, s.vs.front());
        const double simple = simple_caching_cost(cfg, geom).total;
        std::vector<std::string> out;
        for (Scheme scheme : s.methods) {
            const auto c = optimal_cost(scheme, cfg, s.ranges, geom);
            out.push_back(sweep_csv_row(cfg.omega, sigma, c, 1.0 - c.total / simple));
        }
        return out;
    });
    emit(o, "optimize.csv", csv(kSweepCsvHeader, rows));
    return 0;
}

int cmd_simulate(const Options& o) {
    const Settings s = resolve(o, "simple,replication,msr,mbr", false);
    warn(s);
    if (s.vs.size() > 1) throw ConfigError("simulate takes a single --v");
    const auto geom = table_for(s, s.vs.front(), s.ranges.max_n());
    // Runs are parallelized inside replicate(); the outer sweep stays sequential.
    std::vector<std::string> rows;
    for (double sigma : s.sigmas)
        for (double lw : s.log_omegas) {
            const auto cfg = point(s, sigma, lw, s.vs.front());
            for (Scheme scheme : s.methods) {
                SimConfig sc;
                sc.system = cfg;
                sc.method = optimal_cost(scheme, cfg, s.ranges, geom).method;
                sc.horizon = s.horizon;
                sc.warmup = s.warmup;
                sc.seed = s.seed;
                sc.fidelity = s.fidelity;
                const auto res = s.reps >= 2 ? replicate(sc, static_cast<std::size_t>(s.reps), geom)
                                             : simulate(sc, geom);
                rows.push_back(sim_csv_row(res, cfg.omega, sigma));
            }
        }
    emit(o, "simulate.csv", csv(kSimCsvHeader, rows));
    return 0;
}

int cmd_gain(const Options& o) {
    Options with_default_v = o;
    if (with_default_v.vs.empty()) with_default_v.vs = {10.0, 20.0};
    const Settings s = resolve(with_default_v, "simple,replication,msr,mbr", false);
    warn(s);
    std::vector<GeometryTable> tables;
    for (double v : s.vs) tables.push_back(table_for(s, v, s.ranges.max_n()));

    std::string header = "omega,sigma,theta,method,n,k,d";
    for (double v : s.vs) header += ",G_v" + format_double(v);
    auto rows = sweep_rows(s, [&](double sigma, double lw) {
        std::vector<std::string> out;
        for (Scheme scheme : s.methods) {
            std::string row;
            for (std::size_t i = 0; i < s.vs.size(); ++i) {
                const auto cfg = point(s, sigma, lw, s.vs[i]);
                const auto c = optimal_cost(scheme, cfg, s.ranges, tables[i]);
                if (i == 0) {
                    row = format_double(cfg.omega) + "," + format_double(sigma) + "," +
                          format_double(cfg.theta) + "," + std::string(to_string(scheme)) + "," +
                          std::to_string(c.method.n) + "," + std::to_string(c.method.k) + "," +
                          std::to_string(c.method.d);
                }
                row += "," + format_double(operator_gain(cfg, c, tables[i].bs_cost));
            }
            out.push_back(row);
        }
        return out;
    });
    emit(o, "gain.csv", csv(header, rows));
    return 0;
}

int cmd_tables(const Options& o) {
    Options with_grid = o;
    const bool msr_vs_rep = o.table_kind == "msr-vs-replication";
    if (!msr_vs_rep && o.table_kind != "best")
        throw ConfigError("--kind must be best or msr-vs-replication");
    if (with_grid.omega_grid.empty()) with_grid.omega_grid = msr_vs_rep ? "-2:0:5" : "-3.5:0:8";
    const Settings s = resolve(with_grid, "simple,replication,msr,mbr", false);
    if (s.vs.size() > 1) throw ConfigError("tables takes a single --v");
    const auto geom = table_for(s, s.vs.front(), s.ranges.max_n());
    auto rows = sweep_rows(s, [&](double sigma, double lw) {
        const auto cfg = point(s, sigma, lw, s.vs.front());
        std::string row = format_double(lw) + ",";
        if (msr_vs_rep) {
            const auto rep = optimize_replication(cfg, s.ranges, geom);
            const auto msr = optimize_regenerating(cfg, Scheme::MSR, s.ranges, geom);
            row += format_double(100.0 * (1.0 - msr.cost.total / rep.cost.total));
        } else {
            const auto cmp = best_method(cfg, s.ranges, geom);
            row += format_double(100.0 * cmp.savings_vs_simple) + "," +
                   std::string(to_string(cmp.winner));
        }
        row += "," + format_double(sigma);
        return std::vector<std::string>{row};
    });
    emit(o, "tables.csv",
         csv(msr_vs_rep ? "log10_omega,savings_pct,sigma" : "log10_omega,savings_pct,method,sigma",
             rows));
    return 0;
}

int cmd_verify(const Options& o) {
    verification::AcceptanceOptions opt;
    if (o.seed) opt.seed = *o.seed;
    if (o.horizon) opt.sim_horizon = *o.horizon;
    if (o.reps) {
        if (*o.reps < 2) throw ConfigError("verify needs --reps >= 2");
        opt.sim_replications = static_cast<std::size_t>(*o.reps);
    }
    bool ok = true;
    std::string body;
    for (const auto& check : verification::acceptance_checks(opt)) {
        const auto r = check();
        ok = ok && r.passed;
        const auto line = verification::format_line(r);
        body += line + '\n';
        if (!o.out_dir.empty()) std::cout << line << std::endl;
    }
    emit(o, "verify.txt", body);
    return ok ? 0 : 3;
}

void print_error(const std::string& kind, const std::string& message) {
    std::cerr << json{{"error", kind}, {"message", message}}.dump() << std::endl;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy cost model, optimizer and simulator for coded D2D caching clusters"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config_path, "JSON config document");
        sub->add_option("--out", o.out_dir, "output directory (default: stdout)");
        sub->add_option("--seed", o.seed, "RNG seed");
        sub->add_option("--sigma", o.sigmas, "storage cost (repeatable)")->allow_extra_args(false);
        sub->add_option("--v", o.vs, "base-station distance (repeatable)")->allow_extra_args(false);
        sub->add_option("--theta", o.theta, "operator D2D transmission weight");
        sub->add_option("--m", o.m, "expected node count");
        sub->add_option("--lambda", o.lambda, "node failure rate");
        sub->add_option("--r", o.r, "cluster radius");
        sub->add_option("--gamma-d2d", o.gamma_d2d, "D2D pathloss exponent");
        sub->add_option("--gamma-bs", o.gamma_bs, "base-station pathloss exponent");
        sub->add_option("--omega-grid", o.omega_grid, "log10 omega grid LO:HI:N");
        sub->add_option("--methods", o.methods, "comma list of simple,replication,msr,mbr");
        sub->add_option("--fidelity", o.fidelity, "simulation fidelity: chain|spatial");
        sub->add_option("--horizon", o.horizon, "simulated lifetimes per run");
        sub->add_option("--warmup", o.warmup, "fraction of each run discarded");
        sub->add_option("--reps", o.reps, "independent replications");
        sub->add_option("--replication-n", o.replication_n, "replication storage degrees LO:HI");
        sub->add_option("--coded-n", o.coded_n, "regenerating-code storage degrees LO:HI");
    };

    std::map<CLI::App*, int (*)(const Options&)> handlers;
    auto add = [&](const char* name, const char* help, int (*fn)(const Options&)) {
        auto* sub = app.add_subcommand(name, help);
        add_common(sub);
        handlers[sub] = fn;
        return sub;
    };
    add("geometry", "emit the link-cost table as JSON", cmd_geometry)
        ->add_option("--n-max", o.n_max, "largest storage degree tabulated");
    add("cost", "analytic cost sweep", cmd_cost)
        ->add_flag("--all-candidates", o.all_candidates, "emit every candidate, not just optima");
    add("optimize", "optimal parameters per omega", cmd_optimize);
    add("simulate", "Monte Carlo cost rates", cmd_simulate);
    add("gain", "operator gain sweep", cmd_gain);
    add("tables", "savings tables", cmd_tables)
        ->add_option("--kind", o.table_kind, "best | msr-vs-replication");
    add("verify", "run the acceptance checks", cmd_verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("config", e.what());
        return 1;
    }

    try {
        for (auto& [sub, fn] : handlers)
            if (sub->parsed()) return fn(o);
        return 1;
    } catch (const SolverError& e) {
        print_error("numerical", e.what());
        return 2;
    } catch (const ConfigError& e) {
        print_error("config", e.what());
        return 1;
    } catch (const FeasibilityError& e) {
        print_error("config", e.what());
        return 1;
    } catch (const DomainError& e) {
        print_error("config", e.what());
        return 1;
    } catch (const json::exception& e) {
        print_error("config", e.what());
        return 1;
    } catch (const std::exception& e) {
        print_error("numerical", e.what());
        return 2;
    }
}
