#include "reveng/commands.hpp"

#include "reveng/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <regex>

namespace reveng {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

fs::path prepare_out(const RunConfig& c) {
    fs::path dir(c.out_dir);
    fs::create_directories(dir);
    return dir;
}

// Sidecar contents: everything needed to regenerate the file byte for byte.
json metadata(const std::string& command, const RunConfig& c, const fs::path& file, json extra = json::object()) {
    json m{{"tool", "reveng"},
           {"command", command},
           {"file", file.filename().string()},
           {"config", c.to_json()},
           {"csv", {{"separator", ","}, {"line_ending", "LF"}, {"significant_digits", 12}}}};
    if (!extra.empty()) m["arguments"] = std::move(extra);
    return m;
}

Vec ground() {
    Vec psi0 = Vec::Zero(3);
    psi0(0) = 1.0;
    return psi0;
}

SweepSettings sweep_settings(const RunConfig& c) {
    SweepSettings s;
    s.mu = c.schedule.mu;
    s.pulses = resolve_pulses(c);
    s.grid = {c.steps, 2};
    s.strategy = c.deviation_strategy;
    s.threads = c.threads;
    return s;
}

StirapParams stirap_params(const RunConfig& c) {
    StirapParams sp = c.stirap;
    sp.mu = c.schedule.mu;
    return sp;
}

}  // namespace

PulseSet resolve_pulses(const RunConfig& c) {
    switch (c.pulse_source) {
        case PulseSource::Exact: return exact_pulses(c.schedule);
        case PulseSource::Fitted: return fit_exact_pulses(c.schedule, c.samples).pulses;
        case PulseSource::PaperFitted: return published_fitted_pulses();
        case PulseSource::Stirap: return stirap_pulses(stirap_params(c));
    }
    throw ConfigError("pulse_source", "unhandled value");
}

std::pair<int, int> parse_grid(const std::string& text) {
    static const std::regex re(R"(^\s*(\d+)\s*(?:[xX]\s*(\d+))?\s*$)");
    std::smatch m;
    if (!std::regex_match(text, m, re)) throw ConfigError("--grid", "expected NxM, got '" + text + "'");
    const int n = std::stoi(m[1]);
    const int k = m[2].matched ? std::stoi(m[2]) : n;
    if (n < 1 || k < 1) throw ConfigError("--grid", "dimensions must be >= 1");
    return {n, k};
}

std::vector<fs::path> cmd_design(const RunConfig& c, std::ostream& log) {
    c.validate();
    const auto dir = prepare_out(c);
    const auto design = rydberg_design(c.schedule, eliminate_13(c.schedule));
    const auto h = extract_H(design);
    const auto closed = exact_pulses(c.schedule);

    const auto csv_path = dir / "pulses_exact.csv";
    double closed_form_gap = 0.0, herm = 0.0;
    {
        CsvWriter csv(csv_path, {"t_over_T", "omega1_T", "omega2_T"});
        for (int k = 0; k < c.samples; ++k) {
            const double s = static_cast<double>(k) / (c.samples - 1);
            const Mat hs = h(s);
            herm = std::max(herm, hermiticity_defect(hs));
            const auto p = pulse_coefficients(hs);
            closed_form_gap = std::max({closed_form_gap, std::abs(p.omega1 - closed.omega1(s)),
                                        std::abs(p.omega2 - closed.omega2(s))});
            csv.row(std::vector<double>{s, p.omega1, p.omega2});
        }
    }
    write_sidecar(csv_path, metadata("design", c, csv_path));

    const auto rep = forbidden_coupling_report(h, {{0, 2}, {2, 0}}, c.samples);
    const auto json_path = dir / "elimination_report.json";
    write_json(json_path, json{{"forbidden_pairs", json::array({json::array({1, 3}), json::array({3, 1})})},
                               {"max_abs_coupling_T", rep.max_abs},
                               {"worst_t_over_T", rep.worst_time},
                               {"threshold_T", 1e-9},
                               {"eliminated", rep.max_abs < 1e-9},
                               {"max_hermiticity_defect_T", herm},
                               {"max_closed_form_gap_T", closed_form_gap},
                               {"samples", c.samples}});
    write_sidecar(json_path, metadata("design", c, json_path));

    log << "max |<1|H|3>| T = " << format_number(rep.max_abs) << " at t/T = " << format_number(rep.worst_time)
        << "\n";
    return {csv_path, json_path};
}

std::vector<fs::path> cmd_fit(const RunConfig& c, std::ostream& log) {
    c.validate();
    const auto dir = prepare_out(c);
    const auto fitted = fit_exact_pulses(c.schedule, c.samples);

    auto to_vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
    auto describe = [&](const FitResult& r, const char* model, const char* layout) {
        return json{{"model", model},
                    {"layout", layout},
                    {"params", to_vec(r.params)},
                    {"residual_rms_T", r.residual_rms},
                    {"iterations", r.iterations},
                    {"converged", r.converged}};
    };
    const auto params_path = dir / "fit_params.json";
    write_json(params_path,
               json{{"omega1", describe(fitted.omega1, "piecewise_sine", "a1,w1,p1,a2,w2,p2,breakpoint")},
                    {"omega2", describe(fitted.omega2, "gaussian_sum", "a1,c1,d1,a2,c2,d2")},
                    {"samples", c.samples}});
    write_sidecar(params_path, metadata("fit", c, params_path));

    const auto csv_path = dir / "pulses_fitted.csv";
    write_pulse_csv(csv_path, fitted.pulses, c.samples);
    write_sidecar(csv_path, metadata("fit", c, csv_path));

    log << "omega1 rms = " << format_number(fitted.omega1.residual_rms)
        << ", omega2 rms = " << format_number(fitted.omega2.residual_rms) << "\n";
    return {params_path, csv_path};
}

std::vector<fs::path> cmd_simulate(const RunConfig& c, std::ostream& log) {
    c.validate();
    const auto dir = prepare_out(c);
    const auto dev = apply_deviation(resolve_pulses(c), c.deviation, c.deviation_strategy);
    const auto src = pulse_source(dev.pulses, dev.duration);
    const Vec target = target_state(c.schedule.mu);
    const GridSpec grid{c.steps, c.samples};

    SimResult r;
    if (c.lindblad.gamma1 > 0 || c.lindblad.gamma2 > 0) {
        const Vec psi0 = ground();
        r = evolve_lindblad(src, psi0 * psi0.adjoint(), c.lindblad, target, grid);
    } else {
        r = evolve_pure(src, ground(), target, grid);
    }

    const auto csv_path = dir / "trajectory.csv";
    write_trajectory_csv(csv_path, r);
    write_sidecar(csv_path, metadata("simulate", c, csv_path));
    log << "F = " << fixed4(r.fidelity) << "\n";
    return {csv_path};
}

std::vector<fs::path> cmd_stirap(const RunConfig& c, std::ostream& log) {
    c.validate();
    const auto dir = prepare_out(c);
    const auto ps = stirap_pulses(stirap_params(c));
    const auto r = evolve_pure(pulse_source(ps), ground(), target_state(c.schedule.mu), {c.steps, c.samples});

    const auto pulses_path = dir / "pulses_stirap.csv";
    write_pulse_csv(pulses_path, ps, c.samples);
    write_sidecar(pulses_path, metadata("stirap", c, pulses_path));
    const auto traj_path = dir / "trajectory_stirap.csv";
    write_trajectory_csv(traj_path, r);
    write_sidecar(traj_path, metadata("stirap", c, traj_path));
    log << "F = " << fixed4(r.fidelity) << "\n";
    return {pulses_path, traj_path};
}

std::vector<fs::path> cmd_sweep(const RunConfig& c, const SweepRequest& req, std::ostream& log) {
    c.validate();
    if (req.table.has_value() == req.fig.has_value())
        throw ConfigError("--table/--fig", "sweep needs exactly one of --table or --fig");
    const auto dir = prepare_out(c);
    const auto settings = sweep_settings(c);
    json args = json::object();
    if (req.table) args["table"] = *req.table;
    if (req.fig) args["fig"] = *req.fig;
    if (req.grid_x > 0) args["grid"] = std::to_string(req.grid_x) + "x" + std::to_string(req.grid_y);

    if (req.table) {
        const auto path = dir / ("table_" + *req.table + ".csv");
        if (*req.table == "V") {
            std::vector<double> amps;
            for (const auto& p : stirap_reference()) amps.push_back(p.omega0_T);
            const auto pts = stirap_scan(amps, stirap_params(c), settings);
            CsvWriter csv(path, {"omega0_T", "F_published", "F_computed"});
            for (const auto& p : pts) csv.row(std::vector<double>{p.omega0_T, p.published, p.fidelity});
        } else {
            TableId id;
            try {
                id = parse_table_id(*req.table);
            } catch (const PreconditionError& e) {
                throw ConfigError("--table", e.what());
            }
            const auto rows = run_table(id, settings);
            std::vector<std::string> header;
            switch (id) {
                case TableId::I: header = {"d_omega1_rel", "d_omega2_rel"}; break;
                case TableId::II: header = {"d_omega1_rel", "d_T_rel"}; break;
                case TableId::III: header = {"d_omega2_rel", "d_T_rel"}; break;
                case TableId::IV: header = {"d_omega1_rel", "d_omega2_rel", "d_T_rel"}; break;
            }
            header.insert(header.end(), {"F_published", "F_computed"});
            CsvWriter csv(path, header);
            double worst = 0.0;
            for (const auto& r : rows) {
                const auto& d = r.deviation;
                std::vector<double> v;
                switch (id) {
                    case TableId::I: v = {d.d_omega1, d.d_omega2}; break;
                    case TableId::II: v = {d.d_omega1, d.d_T}; break;
                    case TableId::III: v = {d.d_omega2, d.d_T}; break;
                    case TableId::IV: v = {d.d_omega1, d.d_omega2, d.d_T}; break;
                }
                v.insert(v.end(), {r.published, r.fidelity});
                csv.row(v);
                worst = std::max(worst, std::abs(r.fidelity - r.published));
            }
            log << "table " << *req.table << ": max |F - F_published| = " << fixed4(worst) << "\n";
        }
        write_sidecar(path, metadata("sweep", c, path, args));
        return {path};
    }

    const std::string& fig = *req.fig;
    if (fig == "4a" || fig == "4b" || fig == "4c") {
        const DeviationPair pair = fig == "4a"   ? DeviationPair::Omega1Omega2
                                   : fig == "4b" ? DeviationPair::Omega1T
                                                 : DeviationPair::Omega2T;
        int points = c.fig4_points;
        if (req.grid_x > 0) {
            if (req.grid_x != req.grid_y) throw ConfigError("--grid", "deviation grids are square (use NxN)");
            points = req.grid_x;
        }
        const auto g = deviation_grid(pair, points, c.fig4_range, settings);
        const auto path = dir / ("fig4_" + to_string(pair) + ".csv");
        CsvWriter csv(path, {g.x.name, g.y.name, "F"});
        for (int i = 0; i < g.x.points; ++i)
            for (int j = 0; j < g.y.points; ++j) csv.row(std::vector<double>{g.x.at(i), g.y.at(j), g.at(i, j)});
        write_sidecar(path, metadata("sweep", c, path, args));
        log << "wrote " << g.values.size() << " cells\n";
        return {path};
    }
    if (fig == "5") {
        const auto pts = stirap_scan(c.fig5_omega0, stirap_params(c), settings);
        const auto path = dir / "fig5.csv";
        CsvWriter csv(path, {"omega0_T", "F"});
        for (const auto& p : pts) csv.row(std::vector<double>{p.omega0_T, p.fidelity});
        write_sidecar(path, metadata("sweep", c, path, args));
        log << "wrote " << pts.size() << " points\n";
        return {path};
    }
    if (fig == "6") {
        const int nx = req.grid_x > 0 ? req.grid_x : c.fig6_points;
        const int ny = req.grid_y > 0 ? req.grid_y : c.fig6_points;
        const Axis g1{"gamma1_over_omega0", 0.0, c.fig6_max, nx};
        const Axis g2{"gamma2_over_omega0", 0.0, c.fig6_max, ny};
        const auto g = decoherence_map(g1, g2, c.fig6_omega0, settings);
        const auto path = dir / "fig6.csv";
        CsvWriter csv(path, {g.x.name, g.y.name, "F"});
        for (int i = 0; i < g.x.points; ++i)
            for (int j = 0; j < g.y.points; ++j) csv.row(std::vector<double>{g.x.at(i), g.y.at(j), g.at(i, j)});
        write_sidecar(path, metadata("sweep", c, path, args));
        log << "wrote " << g.values.size() << " cells, F(0,0) = " << fixed4(g.at(0, 0)) << "\n";
        return {path};
    }
    throw ConfigError("--fig", "unknown figure '" + fig + "' (expected 4a, 4b, 4c, 5 or 6)");
}

std::vector<CheckOutcome> run_checks(const RunConfig& c) {
    c.validate();
    std::vector<CheckOutcome> out;
    auto add = [&](std::string name, double value, double limit) {
        out.push_back({std::move(name), value < limit, value, limit});
    };

    const auto design = rydberg_design(c.schedule, eliminate_13(c.schedule));
    const auto h = extract_H(design);
    double unit = 0.0, herm = 0.0;
    for (int k = 0; k <= 200; ++k) {
        const double s = k / 200.0;
        unit = std::max(unit, unitarity_defect(build_U(design, s)));
        herm = std::max(herm, hermiticity_defect(h(s)));
    }
    add("unitarity of U", unit, 1e-10);
    add("hermiticity of H", herm, 1e-9);
    add("forbidden |<1|H|3>| T", forbidden_coupling_report(h, {{0, 2}, {2, 0}}, c.samples).max_abs, 1e-9);

    // Integrating the engineered H reproduces U(s)|1>.
    const Vec psi0 = ground();
    const auto gen = evolve_pure(engineered_source(h), psi0, target_state(c.schedule.mu), {c.steps, 11});
    double gap = 0.0;
    for (std::size_t k = 0; k < gen.grid.size(); ++k)
        gap = std::max(gap, (gen.states[k] - build_U(design, gen.grid[k]) * psi0).norm());
    add("generator ||psi - U psi0||", gap, 1e-6);

    const auto src = pulse_source(resolve_pulses(c));
    const Vec target = target_state(c.schedule.mu);
    const auto coarse = evolve_pure(src, psi0, target, {c.steps, 2});
    const auto fine = evolve_pure(src, psi0, target, {2 * c.steps, 2});
    add("step halving |dF|", std::abs(coarse.fidelity - fine.fidelity), 1e-9);
    double drift = 0.0;
    for (const auto& st : coarse.states) drift = std::max(drift, std::abs(st.norm() - 1.0));
    add("norm drift", drift, 1e-6);
    const double f = coarse.fidelity;
    add("fidelity within [0, 1+1e-9]", (f >= 0.0 && f <= 1.0 + 1e-9) ? 0.0 : 1.0, 0.5);
    return out;
}

}  // namespace reveng
