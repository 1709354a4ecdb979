#include "reveng/commands.hpp"
#include "reveng/io.hpp"

#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace reveng;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("reveng_test_" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> f;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        rows.push_back(f);
    }
    return rows;
}

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string(REVENG_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunConfig quick(const fs::path& out) {
    RunConfig c;
    c.out_dir = out.string();
    c.steps = 4000;
    c.samples = 201;
    return c;
}

}  // namespace

TEST_CASE("config JSON round-trips and carries units") {
    RunConfig c;
    c.schedule.mu = 0.5;
    c.steps = 8000;
    c.pulse_source = PulseSource::Stirap;
    c.deviation_strategy = DeviationStrategy::Truncate;
    c.deviation = {0.05, -0.02, 0.01};
    c.lindblad = {0.1, 0.2};
    c.fig5_omega0 = {1.0, 2.0};
    const json j = c.to_json();
    CHECK(j.contains("_units"));
    CHECK(j["pulse_source"] == "stirap");
    const auto back = RunConfig::from_json(j);
    CHECK(back.to_json() == j);
    CHECK(back.stirap.mu == 0.5);
}

TEST_CASE("config validation names the offending field") {
    auto field_of = [](const json& j) -> std::string {
        try {
            RunConfig::from_json(j);
        } catch (const ConfigError& e) {
            return e.field();
        }
        return "";
    };
    CHECK(field_of(json{{"A", 0.0}}) == "A");
    CHECK(field_of(json{{"T", -1.0}}) == "T");
    CHECK(field_of(json{{"steps", 1000}, {"samples", 7}}) == "samples");
    CHECK(field_of(json{{"pulse_source", "laser"}}) == "pulse_source");
    CHECK(field_of(json{{"deviation_strategy", "stretch"}}) == "deviation_strategy");
    CHECK(field_of(json{{"deviation", {{"d_T", 1.5}}}}) == "deviation.d_T");
    CHECK(field_of(json{{"gamma1_T", -0.1}}) == "gamma1_T");
    CHECK(field_of(json{{"mu", "quarter"}}) == "mu");
    CHECK(field_of(json{{"colour", 1}}) == "colour");
    CHECK(field_of(json{{"stirap", {{"omega0_T", 0.0}}}}) == "stirap.omega0_T");
    CHECK(field_of(json::array()) == "<root>");
    CHECK(field_of(json::object()).empty());
    try {
        RunConfig::from_json(json{{"A", 0.0}});
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("singular") != std::string::npos);
    }
}

TEST_CASE("grid strings") {
    CHECK(parse_grid("21x21") == std::pair{21, 21});
    CHECK(parse_grid("3X5") == std::pair{3, 5});
    CHECK(parse_grid("7") == std::pair{7, 7});
    CHECK_THROWS_AS(parse_grid("21by21"), ConfigError);
    CHECK_THROWS_AS(parse_grid("0x3"), ConfigError);
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(1e-20) == "1e-20");
}

TEST_CASE("design writes pulses and an elimination report") {
    const auto dir = scratch("design");
    std::ostringstream log;
    const auto files = cmd_design(quick(dir), log);
    REQUIRE(files.size() == 2);
    const auto rows = read_csv(dir / "pulses_exact.csv");
    CHECK(rows.front() == std::vector<std::string>{"t_over_T", "omega1_T", "omega2_T"});
    CHECK(rows.size() == 202);
    CHECK(rows[1] == std::vector<std::string>{"0", "0", "0"});
    const auto rep = json::parse(slurp(dir / "elimination_report.json"));
    CHECK(rep["max_abs_coupling_T"].get<double>() < 1e-9);
    CHECK(rep["eliminated"] == true);
    for (const auto& f : files) {
        REQUIRE(fs::exists(sidecar_path(f)));
        const auto meta = json::parse(slurp(sidecar_path(f)));
        CHECK(meta["command"] == "design");
        CHECK(RunConfig::from_json(meta["config"]).to_json() == quick(dir).to_json());
    }
    CHECK(slurp(dir / "pulses_exact.csv").find('\r') == std::string::npos);
}

TEST_CASE("design at mu = 0 emits a silent second leg") {
    const auto dir = scratch("design_mu0");
    auto c = quick(dir);
    c.schedule.mu = 0.0;
    std::ostringstream log;
    cmd_design(c, log);
    const auto rows = read_csv(dir / "pulses_exact.csv");
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::abs(std::stod(rows[i][2])) < 1e-12);
}

TEST_CASE("design rejects A = 0") {
    auto c = quick(scratch("design_a0"));
    c.schedule.A = 0.0;
    std::ostringstream log;
    CHECK_THROWS_AS(cmd_design(c, log), ConfigError);
}

TEST_CASE("simulate prints F with four decimals") {
    const auto dir = scratch("simulate");
    auto c = quick(dir);
    c.steps = 20000;
    c.samples = 1001;
    c.pulse_source = PulseSource::Exact;
    std::ostringstream a;
    cmd_simulate(c, a);
    CHECK(a.str() == "F = 1.0000\n");
    const auto rows = read_csv(dir / "trajectory.csv");
    CHECK(rows.front() == std::vector<std::string>{"t_over_T", "p1", "p2", "p3"});
    CHECK(rows.size() == 1002);

    c.pulse_source = PulseSource::PaperFitted;
    std::ostringstream b;
    cmd_simulate(c, b);
    CHECK(std::stod(b.str().substr(4)) >= 0.999);

    c.pulse_source = PulseSource::Stirap;
    c.stirap.omega0 = 10.0;
    std::ostringstream d;
    cmd_simulate(c, d);
    CHECK(std::abs(std::stod(d.str().substr(4)) - 0.8516) < 0.02);

    c.pulse_source = PulseSource::PaperFitted;
    c.lindblad = {0.03154, 0.03154};
    std::ostringstream e;
    cmd_simulate(c, e);
    CHECK(read_csv(dir / "trajectory.csv").front().back() == "purity");
    CHECK(std::abs(std::stod(e.str().substr(4)) - 0.9901) < 0.003);
}

TEST_CASE("fit writes parameters and curves") {
    const auto dir = scratch("fit");
    auto c = quick(dir);
    c.samples = 1001;
    std::ostringstream log;
    cmd_fit(c, log);
    const auto p = json::parse(slurp(dir / "fit_params.json"));
    CHECK(p["omega1"]["params"].size() == 7);
    CHECK(p["omega2"]["params"].size() == 6);
    CHECK(read_csv(dir / "pulses_fitted.csv").size() == 1002);
    CHECK(fs::exists(sidecar_path(dir / "fit_params.json")));
}

TEST_CASE("table I sweep matches the published rows and is deterministic") {
    const auto dir = scratch("table");
    auto c = quick(dir);
    SweepRequest req;
    req.table = "I";
    std::ostringstream log;
    cmd_sweep(c, req, log);
    const auto first = slurp(dir / "table_I.csv");
    const auto rows = read_csv(dir / "table_I.csv");
    CHECK(rows.front() == std::vector<std::string>{"d_omega1_rel", "d_omega2_rel", "F_published", "F_computed"});
    REQUIRE(rows.size() == 10);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::abs(std::stod(rows[i][2]) - std::stod(rows[i][3])) < 0.01);
    cmd_sweep(c, req, log);
    CHECK(slurp(dir / "table_I.csv") == first);
    CHECK(fs::exists(dir / "table_I.csv.meta.json"));
}

TEST_CASE("figure 6 sweep on a 21x21 grid") {
    const auto dir = scratch("fig6");
    auto c = quick(dir);
    c.steps = 2000;
    SweepRequest req;
    req.fig = "6";
    std::tie(req.grid_x, req.grid_y) = parse_grid("21x21");
    std::ostringstream log;
    cmd_sweep(c, req, log);
    const auto rows = read_csv(dir / "fig6.csv");
    REQUIRE(rows.size() == 442);
    CHECK(rows[1][0] == "0");
    CHECK(rows[1][1] == "0");
    CHECK(std::abs(std::stod(rows[1][2]) - 1.0) < 1e-3);
    const auto meta = json::parse(slurp(dir / "fig6.csv.meta.json"));
    CHECK(meta["arguments"]["grid"] == "21x21");
}

TEST_CASE("figure 4 and 5 files") {
    const auto dir = scratch("fig45");
    auto c = quick(dir);
    c.fig5_omega0 = {5.0, 10.0, 20.0};
    std::ostringstream log;
    for (std::string f : {"4a", "4b", "4c"}) {
        SweepRequest req;
        req.fig = f;
        req.grid_x = req.grid_y = 3;
        cmd_sweep(c, req, log);
    }
    CHECK(read_csv(dir / "fig4_omega1_omega2.csv").size() == 10);
    CHECK(read_csv(dir / "fig4_omega1_T.csv").front()[1] == "d_T_rel");
    CHECK(fs::exists(dir / "fig4_omega2_T.csv"));
    SweepRequest five;
    five.fig = "5";
    cmd_sweep(c, five, log);
    CHECK(read_csv(dir / "fig5.csv").size() == 4);

    SweepRequest bad;
    bad.fig = "7";
    CHECK_THROWS_AS(cmd_sweep(c, bad, log), ConfigError);
    SweepRequest none;
    CHECK_THROWS_AS(cmd_sweep(c, none, log), ConfigError);
    SweepRequest skew;
    skew.fig = "4a";
    skew.grid_x = 3;
    skew.grid_y = 4;
    CHECK_THROWS_AS(cmd_sweep(c, skew, log), ConfigError);
}

TEST_CASE("invariant suite passes on the default config") {
    auto c = quick(scratch("check"));
    c.steps = 20000;
    c.samples = 1001;
    for (const auto& r : run_checks(c)) {
        INFO(r.name);
        CHECK(r.pass);
    }
}

TEST_CASE("command-line exit status") {
    const auto dir = scratch("binary");
    const auto log = dir / "log.txt";
    const auto out = " --out " + (dir / "o").string();

    CHECK(run_cli("simulate --pulse-source exact" + out, log) == 0);
    CHECK(slurp(log) == "F = 1.0000\n");

    std::ofstream(dir / "bad.json") << R"({"A": 0})";
    CHECK(run_cli("design --config " + (dir / "bad.json").string() + out, log) != 0);
    CHECK(slurp(log).find("A:") != std::string::npos);

    std::ofstream(dir / "broken.json") << "{not json";
    CHECK(run_cli("design --config " + (dir / "broken.json").string() + out, log) != 0);

    CHECK(run_cli("simulate --pulse-source nothing" + out, log) != 0);
    CHECK(run_cli("sweep --table IX --steps 1000 --samples 2" + out, log) != 0);
    // one RK4 step over the whole window cannot hold the norm
    CHECK(run_cli("simulate --steps 1 --samples 2 --pulse-source exact" + out, log) == 3);
    CHECK(run_cli("frobnicate", log) != 0);

    CHECK(run_cli("--check --steps 4000 --samples 2" + out, log) == 0);
    CHECK(slurp(log).find("[FAIL]") == std::string::npos);

    std::ofstream(dir / "good.json") << R"({"mu": 0.7853981633974483, "steps": 4000, "samples": 101})";
    CHECK(run_cli("simulate --config " + (dir / "good.json").string() + out, log) == 0);
    CHECK(read_csv(dir / "o" / "trajectory.csv").size() == 102);
}
