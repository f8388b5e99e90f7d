// jtrates: regime-switching jump-telegraph short-rate models.
// Reproduces the built-in benchmark tables, prices zero-coupon bonds by
// closed form / PDE / Monte Carlo, simulates rate paths, and estimates
// convexity adjustments.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jtrates/jtrates.hpp"

namespace {

constexpr const char* kMaturityLabels[4] = {"1 month", "1 quarter", "1 semester", "1 year"};

const std::vector<std::string> kConfigKeys = {
    "model", "mu0", "mu1", "sigma0", "sigma1", "eta0", "eta1", "lambda0_q", "lambda1_q",
    "psi0", "psi1", "theta0", "theta1", "r0", "regime0", "maturities", "method", "seed",
    "format", "ode_step", "fd_nx", "fd_nt", "fd_xmax", "mc_step", "mc_paths", "antithetic"};

jtrates::RunConfig load_config(const std::string& path,
                               const std::map<std::string, std::string>& flag_values,
                               const std::vector<std::string>& overrides) {
    jtrates::RunConfig cfg;
    if (const char* env_seed = std::getenv("JTRATES_SEED"))
        cfg.seed = jtrates::detail::parse_u64("JTRATES_SEED", env_seed);
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw jtrates::ConfigError("cannot open config file '" + path + "'");
        cfg = jtrates::parse_config_into(in, cfg);
    }
    for (const auto& [key, value] : flag_values)
        if (!value.empty()) jtrates::apply_config_entry(cfg, key, value);
    for (const auto& assignment : overrides) jtrates::apply_override(cfg, assignment);
    cfg.validate();
    return cfg;
}

void add_config_flags(CLI::App* cmd, std::map<std::string, std::string>& flag_values) {
    for (const auto& key : kConfigKeys) {
        if (cmd->get_option_no_throw("--" + key)) continue; // subcommand-specific flag wins
        cmd->add_option("--" + key, flag_values[key], "override config key '" + key + "'");
    }
}

int run_table(int number, const std::string& method, const std::string& format) {
    using namespace jtrates;
    if (method != "expectation" && method != "pde" && method != "all")
        throw ConfigError("table: method must be expectation, pde, or all");
    const BenchmarkTable table = benchmark_table(number);
    const bool want_exp = method != "pde";
    const bool want_num = method != "expectation";

    double num[2][4] = {};
    double expv[2][4] = {};
    for (std::size_t k = 0; k < 4; ++k) {
        const double tau = table.maturities[k];
        if (want_exp)
            for (int i = 0; i < 2; ++i)
                expv[i][k] = bond_price_expectation(table.model, i, table.r0, 0.0, tau);
        if (want_num) {
            if (table.model.dothan()) {
                SolverConfig cfg;
                cfg.fd_probe_x = table.r0;
                const FdSolution sol = solve_dothan_fd(table.model, tau, cfg);
                for (int i = 0; i < 2; ++i) num[i][k] = sol.price(i, table.r0);
            } else {
                const OdeReduction sol = solve_merton_ode(table.model, tau);
                for (int i = 0; i < 2; ++i) num[i][k] = sol.price_at_tau(i, tau, table.r0);
            }
        }
    }

    const bool markdown = format != "csv";
    if (markdown) {
        std::printf("Table %d: %s, initial rate %g\n\n", number,
                    to_string(table.model.kind).c_str(), table.r0);
        std::printf("| Maturity |");
        if (want_num) std::printf(" F0 (%s) | F1 (%s) |", table.numerical_label, table.numerical_label);
        if (want_exp) std::printf(" F0 (Expectation) | F1 (Expectation) |");
        std::printf("\n|---|");
        if (want_num) std::printf("---|---|");
        if (want_exp) std::printf("---|---|");
        std::printf("\n");
        for (std::size_t k = 0; k < 4; ++k) {
            std::printf("| %s |", kMaturityLabels[k]);
            if (want_num) std::printf(" %.6f | %.6f |", num[0][k], num[1][k]);
            if (want_exp) std::printf(" %.6f | %.6f |", expv[0][k], expv[1][k]);
            std::printf("\n");
        }
    } else {
        std::printf("maturity");
        if (want_num) std::printf(",f0_numerical,f1_numerical");
        if (want_exp) std::printf(",f0_expectation,f1_expectation");
        std::printf("\n");
        for (std::size_t k = 0; k < 4; ++k) {
            std::printf("%.17g", table.maturities[k]);
            if (want_num) std::printf(",%.17g,%.17g", num[0][k], num[1][k]);
            if (want_exp) std::printf(",%.17g,%.17g", expv[0][k], expv[1][k]);
            std::printf("\n");
        }
    }

    bool ok = true;
    for (int i = 0; i < 2; ++i)
        for (std::size_t k = 0; k < 4; ++k) {
            if (want_exp &&
                std::fabs(expv[i][k] - table.expectation[i][k]) > table.expectation_tolerance)
                ok = false;
            if (want_num && std::fabs(num[i][k] - table.numerical[i][k]) > table.numerical_tolerance)
                ok = false;
        }
    if (!ok) std::fprintf(stderr, "table %d: entries outside reference tolerance\n", number);
    return ok ? 0 : 1;
}

int run_price(const jtrates::RunConfig& cfg) {
    using namespace jtrates;
    const ModelSpec model = cfg.to_model_spec();
    const SolverConfig solver = cfg.to_solver_config();

    std::vector<PricingMethod> methods;
    if (cfg.method == PricingMethod::All)
        methods = {PricingMethod::Expectation, PricingMethod::Pde, PricingMethod::Mc};
    else
        methods = {cfg.method};

    const bool markdown = cfg.format == OutputFormat::Markdown;
    if (markdown)
        std::printf("| model | regime | maturity | method | price | stderr |\n|---|---|---|---|---|---|\n");
    else
        std::printf("model,regime,maturity,method,price,stderr\n");

    for (double maturity : cfg.maturities) {
        for (const auto method : methods) {
            double price[2] = {0.0, 0.0};
            double se[2] = {0.0, 0.0};
            switch (method) {
                case PricingMethod::Expectation:
                    for (int i = 0; i < 2; ++i)
                        price[i] = bond_price_expectation(model, i, cfg.r0, 0.0, maturity);
                    break;
                case PricingMethod::Pde:
                    if (model.dothan()) {
                        SolverConfig fd_cfg = solver;
                        fd_cfg.fd_probe_x = cfg.r0;
                        const FdSolution sol = solve_dothan_fd(model, maturity, fd_cfg);
                        for (int i = 0; i < 2; ++i) price[i] = sol.price(i, cfg.r0);
                    } else {
                        const OdeReduction sol = solve_merton_ode(model, maturity, solver);
                        for (int i = 0; i < 2; ++i) price[i] = sol.price_at_tau(i, maturity, cfg.r0);
                    }
                    break;
                case PricingMethod::Mc:
                    for (int i = 0; i < 2; ++i) {
                        const McEstimate est = price_bond_mc(model, i, cfg.r0, maturity,
                                                             cfg.mc_paths, solver, cfg.seed);
                        price[i] = est.value;
                        se[i] = est.stderr_;
                    }
                    break;
                case PricingMethod::All: break; // unreachable
            }
            for (int i = 0; i < 2; ++i) {
                if (markdown)
                    std::printf("| %s | %d | %g | %s | %.6f | %.3g |\n",
                                to_string(model.kind).c_str(), i, maturity,
                                to_string(method).c_str(), price[i], se[i]);
                else
                    std::printf("%s,%d,%.17g,%s,%.17g,%.17g\n", to_string(model.kind).c_str(), i,
                                maturity, to_string(method).c_str(), price[i], se[i]);
            }
        }
    }
    return 0;
}

int run_simulate(const jtrates::RunConfig& cfg, std::size_t n_paths, double horizon,
                 const std::string& out_path) {
    using namespace jtrates;
    const ModelSpec model = cfg.to_model_spec();
    std::ofstream out(out_path);
    if (!out) throw ConfigError("cannot open output file '" + out_path + "'");
    out << "path_id,time,regime,rate,integral\n";
    char buf[160];
    for (std::size_t p = 0; p < n_paths; ++p) {
        SubstreamRng rng(cfg.seed, p);
        const RatePath path =
            simulate_rate(model, cfg.r0, cfg.regime0, horizon, cfg.mc_step, rng);
        for (std::size_t k = 0; k < path.size(); ++k) {
            std::snprintf(buf, sizeof(buf), "%zu,%.17g,%d,%.17g,%.17g\n", p, path.times[k],
                          path.regimes[k], path.rates[k], path.integrals[k]);
            out << buf;
        }
    }
    return 0;
}

int run_convexity(const jtrates::RunConfig& cfg, const std::string& method,
                  const std::string& out_path) {
    using namespace jtrates;
    const ModelSpec model = cfg.to_model_spec();
    const double horizon = *std::max_element(cfg.maturities.begin(), cfg.maturities.end());
    const auto grid = geometric_maturity_grid(horizon);
    const ForwardMethod fm = method == "mc" ? ForwardMethod::Mc : ForwardMethod::Pde;
    if (method != "mc" && method != "pde")
        throw ConfigError("convexity: method must be pde or mc");
    const ConvexityReport rep = convexity_adjustment(model, cfg.regime0, cfg.r0, grid, fm,
                                                     cfg.to_solver_config(), cfg.seed);
    std::ofstream out(out_path);
    if (!out) throw ConfigError("cannot open output file '" + out_path + "'");
    out << to_csv(rep);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regime-switching jump-telegraph short-rate models"};
    app.require_subcommand(1);

    int table_number = 1;
    std::string table_method = "all";
    std::string table_format = "markdown";
    auto* table_cmd = app.add_subcommand("table", "reproduce a built-in benchmark table (1-4)");
    table_cmd->add_option("number", table_number, "table number")->required()->check(CLI::Range(1, 4));
    table_cmd->add_option("--method", table_method, "expectation, pde, or all")
        ->check(CLI::IsMember({"expectation", "pde", "all"}));
    table_cmd->add_option("--format", table_format, "csv or markdown")
        ->check(CLI::IsMember({"csv", "markdown"}));

    std::string config_path;
    std::vector<std::string> overrides;
    std::map<std::string, std::string> price_flags;
    auto* price_cmd = app.add_subcommand("price", "price zero-coupon bonds from a config");
    price_cmd->add_option("--config", config_path, "config file (key = value)");
    price_cmd->add_option("--override", overrides, "key=value override");
    add_config_flags(price_cmd, price_flags);

    std::string sim_config;
    std::vector<std::string> sim_overrides;
    std::map<std::string, std::string> sim_flags;
    std::size_t sim_paths = 1;
    double sim_horizon = 1.0;
    std::string sim_out = "paths.csv";
    auto* sim_cmd = app.add_subcommand("simulate", "simulate short-rate paths to CSV");
    sim_cmd->add_option("--config", sim_config, "config file");
    sim_cmd->add_option("--override", sim_overrides, "key=value override");
    sim_cmd->add_option("--paths", sim_paths, "number of paths");
    sim_cmd->add_option("--horizon", sim_horizon, "simulation horizon (years)");
    sim_cmd->add_option("--out", sim_out, "output CSV file");
    add_config_flags(sim_cmd, sim_flags);

    std::string conv_config;
    std::vector<std::string> conv_overrides;
    std::map<std::string, std::string> conv_flags;
    std::string conv_method = "pde";
    std::string conv_out = "convexity.csv";
    auto* conv_cmd = app.add_subcommand("convexity", "convexity-adjustment report to CSV");
    conv_cmd->add_option("--config", conv_config, "config file");
    conv_cmd->add_option("--override", conv_overrides, "key=value override");
    conv_cmd->add_option("--method", conv_method, "pde or mc");
    conv_cmd->add_option("--out", conv_out, "output CSV file");
    add_config_flags(conv_cmd, conv_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (table_cmd->parsed()) return run_table(table_number, table_method, table_format);
        if (price_cmd->parsed()) return run_price(load_config(config_path, price_flags, overrides));
        if (sim_cmd->parsed())
            return run_simulate(load_config(sim_config, sim_flags, sim_overrides), sim_paths,
                                sim_horizon, sim_out);
        if (conv_cmd->parsed())
            return run_convexity(load_config(conv_config, conv_flags, conv_overrides), conv_method,
                                 conv_out);
    } catch (const jtrates::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
