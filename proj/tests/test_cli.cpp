#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "jtrates/config.hpp"

using namespace jtrates;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_raw(const std::string& cmd_line) {
    const std::string cmd = cmd_line + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult res;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof(buf), pipe)) res.out.append(buf, n);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

RunResult run(const std::string& args) { return run_raw(std::string(JTRATES_BIN) + " " + args); }

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_table1_config(const std::string& path, const std::string& extra = {}) {
    std::ofstream out(path);
    out << "# benchmark setup, two-regime additive-jump model\n"
        << "model = jt_merton\n"
        << "mu0 = -0.02\nmu1 = 0.05\n"
        << "eta0 = 0.01\neta1 = -0.02\n"
        << "lambda0_q = 1\nlambda1_q = 2\n"
        << "r0 = 0.05\n"
        << extra;
}

} // namespace

TEST_CASE("config round trip is the identity") {
    RunConfig cfg;
    cfg.model = ModelKind::JtdDothan;
    cfg.mu0 = -0.1;
    cfg.mu1 = 0.25;
    cfg.sigma0 = cfg.sigma1 = 0.4;
    cfg.eta0 = 0.1;
    cfg.eta1 = -0.2;
    cfg.lambda0_q = 1.0;
    cfg.lambda1_q = 2.0;
    cfg.psi0 = cfg.psi1 = 1.0;
    cfg.maturities = {1.0 / 12.0, 0.25, 0.5, 1.0};
    cfg.method = PricingMethod::Mc;
    cfg.seed = 987654321;
    cfg.format = OutputFormat::Csv;
    cfg.mc_paths = 12345;
    cfg.antithetic = true;

    std::istringstream first(serialize_config(cfg));
    const RunConfig parsed = parse_config(first);
    CHECK(parsed == cfg);
    std::istringstream second(serialize_config(parsed));
    CHECK(parse_config(second) == cfg);
}

TEST_CASE("config errors carry line numbers and key names") {
    {
        std::istringstream in("model = jt_merton\nbogus_key = 3\n");
        CHECK_THROWS_WITH_AS(parse_config(in), doctest::Contains("line 2"), ConfigError);
    }
    {
        std::istringstream in("mu0 = abc\n");
        CHECK_THROWS_WITH_AS(parse_config(in), doctest::Contains("mu0"), ConfigError);
    }
    {
        std::istringstream in("model = vasicek\n");
        CHECK_THROWS_WITH_AS(parse_config(in), doctest::Contains("vasicek"), ConfigError);
    }
    {
        std::istringstream in("just some words\n");
        CHECK_THROWS_AS(parse_config(in), ConfigError);
    }
}

TEST_CASE("validation rejects volatility on non-diffusive kinds") {
    std::istringstream in("model = jt_merton\nsigma0 = 0.1\n");
    RunConfig cfg = parse_config(in);
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("sigma"), ConfigError);
}

TEST_CASE("override parsing") {
    RunConfig cfg;
    apply_override(cfg, "mu1 = 0.07");
    CHECK(cfg.mu1 == 0.07);
    CHECK_THROWS_AS(apply_override(cfg, "mu1"), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "nope=1"), ConfigError);
}

TEST_CASE("table command reproduces the built-in references") {
    const RunResult res = run("table 1 --format csv");
    CHECK(res.exit_code == 0);
    CHECK(res.out.rfind("maturity,", 0) == 0);
    std::size_t rows = 0;
    for (char c : res.out)
        if (c == '\n') ++rows;
    CHECK(rows == 5);

    CHECK(run("table 4 --method expectation").exit_code == 0);
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run("table 5").exit_code == 2);
    CHECK(run("frobnicate").exit_code == 2);
    CHECK(run("price --model=vasicek").exit_code == 2);
    CHECK(run("price --config /no/such/file.cfg").exit_code == 2);
}

TEST_CASE("zero maturity prices to one for every method") {
    write_table1_config("cli_t0.cfg", "maturities = 0\nmc_paths = 128\nformat = csv\n");
    const RunResult res = run("price --config cli_t0.cfg");
    CHECK(res.exit_code == 0);
    std::istringstream lines(res.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "model,regime,maturity,method,price,stderr");
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        // price is the fifth field
        std::istringstream fields(line);
        std::string f;
        for (int k = 0; k < 5; ++k) std::getline(fields, f, ',');
        CHECK(std::stod(f) == 1.0);
    }
    CHECK(rows == 6); // 3 methods x 2 regimes
}

TEST_CASE("simulation output is deterministic") {
    write_table1_config("cli_sim.cfg", "seed = 42\n");
    CHECK(run("simulate --config cli_sim.cfg --paths 3 --horizon 2 --out cli_sim_a.csv").exit_code == 0);
    CHECK(run("simulate --config cli_sim.cfg --paths 3 --horizon 2 --out cli_sim_b.csv").exit_code == 0);
    const std::string a = read_file("cli_sim_a.csv");
    CHECK(a == read_file("cli_sim_b.csv"));
    CHECK(a.rfind("path_id,time,regime,rate,integral\n", 0) == 0);

    // env seed overrides the default (but not a file-provided seed)
    write_table1_config("cli_sim_noseed.cfg");
    CHECK(run_raw("JTRATES_SEED=42 " JTRATES_BIN
                  " simulate --config cli_sim_noseed.cfg --paths 3 --horizon 2 --out cli_sim_c.csv")
              .exit_code == 0);
    CHECK(read_file("cli_sim_c.csv") == a);
    CHECK(run_raw("JTRATES_SEED=7 " JTRATES_BIN
                  " simulate --config cli_sim_noseed.cfg --paths 3 --horizon 2 --out cli_sim_e.csv")
              .exit_code == 0);
    CHECK(read_file("cli_sim_e.csv") != a);

    // zero horizon: one row per path plus the header
    CHECK(run("simulate --config cli_sim.cfg --paths 2 --horizon 0 --out cli_sim_d.csv").exit_code == 0);
    const std::string d = read_file("cli_sim_d.csv");
    CHECK(std::count(d.begin(), d.end(), '\n') == 3);
}

TEST_CASE("convexity report from the command line") {
    write_table1_config("cli_conv.cfg", "regime0 = 1\n");
    CHECK(run("convexity --config cli_conv.cfg --method pde --out cli_conv.csv").exit_code == 0);
    std::istringstream lines(read_file("cli_conv.csv"));
    std::string line;
    std::getline(lines, line);
    CHECK(line == "maturity,f_exp,f_impl,adjustment,stderr");
    std::getline(lines, line); // shortest maturity, T/40
    std::istringstream fields(line);
    std::string f;
    for (int k = 0; k < 4; ++k) std::getline(fields, f, ',');
    CHECK(std::fabs(std::stod(f)) <= 1e-5);

    CHECK(run("convexity --config cli_conv.cfg --method newton --out cli_conv2.csv").exit_code == 2);
}
