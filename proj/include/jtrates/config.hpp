#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "jtrates/model.hpp"
#include "jtrates/pde.hpp"

namespace jtrates {

/// Raised for malformed or inconsistent run configuration; the message names
/// the offending key and, for file input, the line number.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class PricingMethod { Expectation, Pde, Mc, All };
enum class OutputFormat { Csv, Markdown };

inline std::string to_string(PricingMethod m) {
    switch (m) {
        case PricingMethod::Expectation: return "expectation";
        case PricingMethod::Pde: return "pde";
        case PricingMethod::Mc: return "mc";
        case PricingMethod::All: return "all";
    }
    return "?";
}

inline std::string to_string(OutputFormat f) {
    return f == OutputFormat::Csv ? "csv" : "markdown";
}

/// One experiment description: model parameters (risk-neutral intensities,
/// as the benchmark tables quote them), initial state, maturities, method,
/// and solver overrides. Parsed from flat `key = value` text with #-comments.
struct RunConfig {
    ModelKind model = ModelKind::JtMerton;
    double mu0 = 0.0, mu1 = 0.0;
    double sigma0 = 0.0, sigma1 = 0.0;
    double eta0 = 0.0, eta1 = 0.0;
    double lambda0_q = 1.0, lambda1_q = 1.0;
    double psi0 = 0.0, psi1 = 0.0;
    double theta0 = 1.0, theta1 = 1.0;
    double r0 = 0.05;
    int regime0 = 0;
    std::vector<double> maturities{1.0};
    PricingMethod method = PricingMethod::All;
    std::uint64_t seed = 20240915;
    OutputFormat format = OutputFormat::Markdown;
    // solver overrides
    double ode_step = 1e-4;
    std::size_t fd_nx = 2000;
    std::size_t fd_nt = 2000;
    double fd_xmax = 0.0;
    double mc_step = 1.0 / 256.0;
    std::size_t mc_paths = 1'000'000;
    bool antithetic = false;

    bool operator==(const RunConfig&) const = default;

    ModelSpec to_model_spec() const {
        ModelSpec m;
        m.kind = model;
        m.mu0 = mu0;
        m.mu1 = mu1;
        m.sigma0 = sigma0;
        m.sigma1 = sigma1;
        m.eta0 = eta0;
        m.eta1 = eta1;
        m.lambda0 = lambda0_q;
        m.lambda1 = lambda1_q;
        m.measure = MeasureTag::RiskNeutral;
        m.measure_params = MeasureParams{theta0, theta1, psi0, psi1};
        return m;
    }

    SolverConfig to_solver_config() const {
        SolverConfig cfg;
        cfg.ode_step = ode_step;
        cfg.fd_nx = fd_nx;
        cfg.fd_nt = fd_nt;
        cfg.fd_xmax = fd_xmax;
        cfg.mc_step = mc_step;
        cfg.mc_paths = mc_paths;
        cfg.antithetic = antithetic;
        return cfg;
    }

    void validate() const {
        if (regime0 != 0 && regime0 != 1) throw ConfigError("regime0: must be 0 or 1");
        if (maturities.empty()) throw ConfigError("maturities: must not be empty");
        for (double t : maturities)
            if (!(t >= 0.0)) throw ConfigError("maturities: entries must be >= 0");
        if (!is_diffusive(model) && (sigma0 != 0.0 || sigma1 != 0.0))
            throw ConfigError("sigma0/sigma1: nonzero volatility given for non-diffusive model '" +
                              jtrates::to_string(model) + "'");
        try {
            to_model_spec().validate();
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
    if (pos != v.size()) throw ConfigError(key + ": expected a number, got '" + v + "'");
    return x;
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const auto x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
    }
}

} // namespace detail

inline ModelKind parse_model_kind(const std::string& v) {
    if (v == "jt_merton") return ModelKind::JtMerton;
    if (v == "jt_dothan") return ModelKind::JtDothan;
    if (v == "jtd_merton") return ModelKind::JtdMerton;
    if (v == "jtd_dothan") return ModelKind::JtdDothan;
    throw ConfigError("model: unknown kind '" + v +
                      "' (expected jt_merton, jt_dothan, jtd_merton, jtd_dothan)");
}

inline PricingMethod parse_method(const std::string& v) {
    if (v == "expectation") return PricingMethod::Expectation;
    if (v == "pde") return PricingMethod::Pde;
    if (v == "mc") return PricingMethod::Mc;
    if (v == "all") return PricingMethod::All;
    throw ConfigError("method: unknown method '" + v + "'");
}

inline OutputFormat parse_format(const std::string& v) {
    if (v == "csv") return OutputFormat::Csv;
    if (v == "markdown") return OutputFormat::Markdown;
    throw ConfigError("format: unknown format '" + v + "'");
}

/// Apply one `key = value` assignment.
inline void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "model") cfg.model = parse_model_kind(value);
    else if (key == "mu0") cfg.mu0 = detail::parse_double(key, value);
    else if (key == "mu1") cfg.mu1 = detail::parse_double(key, value);
    else if (key == "sigma0") cfg.sigma0 = detail::parse_double(key, value);
    else if (key == "sigma1") cfg.sigma1 = detail::parse_double(key, value);
    else if (key == "eta0") cfg.eta0 = detail::parse_double(key, value);
    else if (key == "eta1") cfg.eta1 = detail::parse_double(key, value);
    else if (key == "lambda0_q") cfg.lambda0_q = detail::parse_double(key, value);
    else if (key == "lambda1_q") cfg.lambda1_q = detail::parse_double(key, value);
    else if (key == "psi0") cfg.psi0 = detail::parse_double(key, value);
    else if (key == "psi1") cfg.psi1 = detail::parse_double(key, value);
    else if (key == "theta0") cfg.theta0 = detail::parse_double(key, value);
    else if (key == "theta1") cfg.theta1 = detail::parse_double(key, value);
    else if (key == "r0") cfg.r0 = detail::parse_double(key, value);
    else if (key == "regime0") cfg.regime0 = static_cast<int>(detail::parse_u64(key, value));
    else if (key == "maturities") {
        std::vector<double> out;
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = detail::trim(item);
            if (!item.empty()) out.push_back(detail::parse_double(key, item));
        }
        if (out.empty()) throw ConfigError("maturities: empty list");
        cfg.maturities = std::move(out);
    }
    else if (key == "method") cfg.method = parse_method(value);
    else if (key == "seed") cfg.seed = detail::parse_u64(key, value);
    else if (key == "format") cfg.format = parse_format(value);
    else if (key == "ode_step") cfg.ode_step = detail::parse_double(key, value);
    else if (key == "fd_nx") cfg.fd_nx = detail::parse_u64(key, value);
    else if (key == "fd_nt") cfg.fd_nt = detail::parse_u64(key, value);
    else if (key == "fd_xmax") cfg.fd_xmax = detail::parse_double(key, value);
    else if (key == "mc_step") cfg.mc_step = detail::parse_double(key, value);
    else if (key == "mc_paths") cfg.mc_paths = detail::parse_u64(key, value);
    else if (key == "antithetic") {
        if (value == "true" || value == "1") cfg.antithetic = true;
        else if (value == "false" || value == "0") cfg.antithetic = false;
        else throw ConfigError("antithetic: expected true/false");
    }
    else throw ConfigError("unknown key '" + key + "'");
}

/// Parse `key = value` text with # comments and blank lines on top of the
/// given defaults. Errors carry the source line number.
inline RunConfig parse_config_into(std::istream& in, RunConfig cfg) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        try {
            apply_config_entry(cfg, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

inline RunConfig parse_config(std::istream& in) { return parse_config_into(in, RunConfig{}); }

/// Apply a --override argument of the form key=value.
inline void apply_override(RunConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override '" + assignment + "': expected key=value");
    apply_config_entry(cfg, detail::trim(assignment.substr(0, eq)),
                       detail::trim(assignment.substr(eq + 1)));
}

inline std::string serialize_config(const RunConfig& cfg) {
    std::string out;
    char buf[128];
    auto put = [&](const char* key, const std::string& v) {
        out += key;
        out += " = ";
        out += v;
        out += '\n';
    };
    auto putf = [&](const char* key, double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        put(key, buf);
    };
    put("model", to_string(cfg.model));
    putf("mu0", cfg.mu0);
    putf("mu1", cfg.mu1);
    putf("sigma0", cfg.sigma0);
    putf("sigma1", cfg.sigma1);
    putf("eta0", cfg.eta0);
    putf("eta1", cfg.eta1);
    putf("lambda0_q", cfg.lambda0_q);
    putf("lambda1_q", cfg.lambda1_q);
    putf("psi0", cfg.psi0);
    putf("psi1", cfg.psi1);
    putf("theta0", cfg.theta0);
    putf("theta1", cfg.theta1);
    putf("r0", cfg.r0);
    put("regime0", std::to_string(cfg.regime0));
    {
        std::string list;
        for (std::size_t k = 0; k < cfg.maturities.size(); ++k) {
            std::snprintf(buf, sizeof(buf), "%.17g", cfg.maturities[k]);
            if (k) list += ", ";
            list += buf;
        }
        put("maturities", list);
    }
    put("method", to_string(cfg.method));
    put("seed", std::to_string(cfg.seed));
    put("format", to_string(cfg.format));
    putf("ode_step", cfg.ode_step);
    put("fd_nx", std::to_string(cfg.fd_nx));
    put("fd_nt", std::to_string(cfg.fd_nt));
    putf("fd_xmax", cfg.fd_xmax);
    putf("mc_step", cfg.mc_step);
    put("mc_paths", std::to_string(cfg.mc_paths));
    put("antithetic", cfg.antithetic ? "true" : "false");
    return out;
}

} // namespace jtrates
