// reveng: design, fit, simulate and sweep engineered three-level pulses.

#include "reveng/commands.hpp"
#include "reveng/io.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct Overrides {
    std::string config_path;
    std::string out;
    std::optional<int> steps;
    std::optional<int> samples;
    std::string pulse_source;
    std::string deviation_strategy;
    std::optional<double> omega0;
    std::optional<double> mu;
    std::optional<double> A;
    std::optional<double> gamma1;
    std::optional<double> gamma2;
    std::optional<unsigned> threads;
    bool check = false;
};

reveng::RunConfig assemble(const Overrides& o) {
    reveng::RunConfig c = o.config_path.empty() ? reveng::RunConfig{} : reveng::load_config(o.config_path);
    if (!o.out.empty()) c.out_dir = o.out;
    if (o.steps) c.steps = *o.steps;
    if (o.samples) c.samples = *o.samples;
    if (!o.pulse_source.empty()) c.pulse_source = reveng::parse_pulse_source(o.pulse_source);
    if (!o.deviation_strategy.empty()) {
        try {
            c.deviation_strategy = reveng::parse_deviation_strategy(o.deviation_strategy);
        } catch (const reveng::PreconditionError& e) {
            throw reveng::ConfigError("deviation_strategy", e.what());
        }
    }
    if (o.omega0) c.stirap.omega0 = *o.omega0;
    if (o.mu) c.schedule.mu = *o.mu;
    if (o.A) c.schedule.A = *o.A;
    if (o.gamma1) c.lindblad.gamma1 = *o.gamma1;
    if (o.gamma2) c.lindblad.gamma2 = *o.gamma2;
    if (o.threads) c.threads = *o.threads;
    c.stirap.mu = c.schedule.mu;
    c.validate();
    return c;
}

bool report_checks(const reveng::RunConfig& c) {
    bool ok = true;
    for (const auto& r : reveng::run_checks(c)) {
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << reveng::format_number(r.value)
                  << " (limit " << reveng::format_number(r.limit) << ")\n";
        ok = ok && r.pass;
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reverse-engineered pulse design and simulation for three-level transfer"};
    app.require_subcommand(0, 1);
    Overrides o;
    app.add_option("--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--out", o.out, "output directory");
    app.add_option("--steps", o.steps, "RK4 steps over the interaction window");
    app.add_option("--samples", o.samples, "recorded samples (samples-1 must divide steps)");
    app.add_option("--pulse-source", o.pulse_source, "exact | fitted | paper_fitted | stirap");
    app.add_option("--deviation-strategy", o.deviation_strategy, "pulse_area | truncate | rescale");
    app.add_option("--omega0", o.omega0, "STIRAP peak amplitude Omega0*T");
    app.add_option("--mu", o.mu, "target mixing angle (radians)");
    app.add_option("-A,--amplitude", o.A, "peak of beta (radians)");
    app.add_option("--gamma1", o.gamma1, "decay rate Gamma1*T");
    app.add_option("--gamma2", o.gamma2, "decay rate Gamma2*T");
    app.add_option("--threads", o.threads, "worker threads for sweeps (0 = all cores)");
    app.add_flag("--check", o.check, "run the invariant suite on the current config");

    auto* design = app.add_subcommand("design", "engineered pulses and forbidden-coupling report");
    auto* fit = app.add_subcommand("fit", "fit laboratory pulse models to the exact pulses");
    auto* simulate = app.add_subcommand("simulate", "population trajectory and final fidelity");
    auto* sweep = app.add_subcommand("sweep", "robustness tables and figure grids");
    auto* stirap = app.add_subcommand("stirap", "STIRAP baseline at --omega0");
    for (auto* sub : {design, fit, simulate, sweep, stirap}) sub->fallthrough();

    std::string table, fig, grid;
    sweep->add_option("--table", table, "I | II | III | IV | V");
    sweep->add_option("--fig", fig, "4a | 4b | 4c | 5 | 6");
    sweep->add_option("--grid", grid, "NxM grid size");

    CLI11_PARSE(app, argc, argv);

    try {
        const auto config = assemble(o);
        bool ok = true;
        if (o.check) ok = report_checks(config);
        if (*design) reveng::cmd_design(config, std::cout);
        else if (*fit) reveng::cmd_fit(config, std::cout);
        else if (*simulate) reveng::cmd_simulate(config, std::cout);
        else if (*stirap) reveng::cmd_stirap(config, std::cout);
        else if (*sweep) {
            reveng::SweepRequest req;
            if (!table.empty()) req.table = table;
            if (!fig.empty()) req.fig = fig;
            if (!grid.empty()) std::tie(req.grid_x, req.grid_y) = reveng::parse_grid(grid);
            reveng::cmd_sweep(config, req, std::cout);
        } else if (!o.check) {
            std::cerr << app.help();
            return 2;
        }
        return ok ? 0 : 1;
    } catch (const reveng::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const reveng::PreconditionError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const reveng::IntegrationQualityError& e) {
        std::cerr << "integration quality: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
