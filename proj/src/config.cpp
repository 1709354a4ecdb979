#include "reveng/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace reveng {

using nlohmann::json;

std::string to_string(PulseSource p) {
    switch (p) {
        case PulseSource::Exact: return "exact";
        case PulseSource::Fitted: return "fitted";
        case PulseSource::PaperFitted: return "paper_fitted";
        case PulseSource::Stirap: return "stirap";
    }
    return "?";
}

PulseSource parse_pulse_source(const std::string& name) {
    if (name == "exact") return PulseSource::Exact;
    if (name == "fitted") return PulseSource::Fitted;
    if (name == "paper_fitted") return PulseSource::PaperFitted;
    if (name == "stirap") return PulseSource::Stirap;
    throw ConfigError("pulse_source", "unknown value '" + name +
                                          "' (expected exact, fitted, paper_fitted or stirap)");
}

ConfigError::ConfigError(std::string field, const std::string& message)
    : PreconditionError(field + ": " + message), field_(std::move(field)) {}

RunConfig::RunConfig() {
    for (int i = 1; i <= 160; ++i) fig5_omega0.push_back(0.25 * i);
}

void RunConfig::validate() const {
    auto require = [](bool ok, const char* field, const char* message) {
        if (!ok) throw ConfigError(field, message);
    };
    require(std::isfinite(schedule.mu), "mu", "must be finite");
    require(schedule.A > 0 && std::isfinite(schedule.A), "A",
            "must be > 0 (A = 0 makes cot(beta) singular everywhere)");
    require(schedule.A < kPi, "A", "must be < pi (sin(beta) would vanish inside the window)");
    require(schedule.T > 0 && std::isfinite(schedule.T), "T", "must be > 0");
    require(steps >= 1, "steps", "must be >= 1");
    require(samples >= 2, "samples", "must be >= 2");
    require(steps % (samples - 1) == 0, "samples", "samples-1 must divide steps");
    for (auto [v, f] : {std::pair{deviation.d_omega1, "deviation.d_omega1"},
                        std::pair{deviation.d_omega2, "deviation.d_omega2"},
                        std::pair{deviation.d_T, "deviation.d_T"}})
        require(v > -1.0 && v < 1.0, f, "must lie in (-1, 1)");
    require(stirap.omega0 > 0, "stirap.omega0_T", "must be > 0");
    require(stirap.tc > 0, "stirap.tc_over_T", "must be > 0");
    require(stirap.t0 > 0, "stirap.t0_over_T", "must be > 0");
    require(lindblad.gamma1 >= 0, "gamma1_T", "must be >= 0");
    require(lindblad.gamma2 >= 0, "gamma2_T", "must be >= 0");
    require(fig4_points >= 1, "sweep.fig4_points", "must be >= 1");
    require(fig4_range >= 0 && fig4_range < 1, "sweep.fig4_range", "must lie in [0, 1)");
    require(fig6_points >= 1, "sweep.fig6_points", "must be >= 1");
    require(fig6_max >= 0, "sweep.fig6_max", "must be >= 0");
    require(fig6_omega0 > 0, "sweep.fig6_omega0_T", "must be > 0");
    require(!fig5_omega0.empty(), "sweep.fig5_omega0_T", "must not be empty");
    for (double w : fig5_omega0) require(w > 0, "sweep.fig5_omega0_T", "entries must be > 0");
    require(!out_dir.empty(), "out_dir", "must not be empty");
}

json RunConfig::to_json() const {
    return json{
        {"_units",
         {{"mu", "radians"},
          {"A", "radians"},
          {"T", "arbitrary time unit; all rates below are dimensionless"},
          {"omega0_T", "Omega0*T"},
          {"tc_over_T", "t_c/T"},
          {"t0_over_T", "t_0/T"},
          {"gamma1_T", "Gamma1*T"},
          {"gamma2_T", "Gamma2*T"},
          {"fig6_max", "Gamma/Omega0"},
          {"deviation", "relative (0.1 = +10%)"}}},
        {"mu", schedule.mu},
        {"A", schedule.A},
        {"T", schedule.T},
        {"steps", steps},
        {"samples", samples},
        {"pulse_source", to_string(pulse_source)},
        {"deviation_strategy", to_string(deviation_strategy)},
        {"deviation", {{"d_omega1", deviation.d_omega1}, {"d_omega2", deviation.d_omega2}, {"d_T", deviation.d_T}}},
        {"out_dir", out_dir},
        {"threads", threads},
        {"stirap", {{"omega0_T", stirap.omega0}, {"tc_over_T", stirap.tc}, {"t0_over_T", stirap.t0}}},
        {"gamma1_T", lindblad.gamma1},
        {"gamma2_T", lindblad.gamma2},
        {"sweep",
         {{"fig4_points", fig4_points},
          {"fig4_range", fig4_range},
          {"fig6_points", fig6_points},
          {"fig6_max", fig6_max},
          {"fig6_omega0_T", fig6_omega0},
          {"fig5_omega0_T", fig5_omega0}}},
    };
}

namespace {

template <class T>
void read(const json& j, const char* key, T& into, const std::string& field) {
    if (!j.contains(key)) return;
    try {
        into = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(field, std::string("wrong type (") + e.what() + ")");
    }
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& prefix) {
    for (const auto& [k, v] : j.items())
        if (!known.count(k)) throw ConfigError(prefix + k, "unknown key");
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("<root>", "config must be a JSON object");
    reject_unknown(j,
                   {"_units", "mu", "A", "T", "steps", "samples", "pulse_source", "deviation_strategy",
                    "deviation", "out_dir", "threads", "stirap", "gamma1_T", "gamma2_T", "sweep"},
                   "");
    RunConfig c;
    read(j, "mu", c.schedule.mu, "mu");
    read(j, "A", c.schedule.A, "A");
    read(j, "T", c.schedule.T, "T");
    read(j, "steps", c.steps, "steps");
    read(j, "samples", c.samples, "samples");
    read(j, "out_dir", c.out_dir, "out_dir");
    read(j, "threads", c.threads, "threads");
    read(j, "gamma1_T", c.lindblad.gamma1, "gamma1_T");
    read(j, "gamma2_T", c.lindblad.gamma2, "gamma2_T");
    if (j.contains("pulse_source")) {
        std::string s;
        read(j, "pulse_source", s, "pulse_source");
        c.pulse_source = parse_pulse_source(s);
    }
    if (j.contains("deviation_strategy")) {
        std::string s;
        read(j, "deviation_strategy", s, "deviation_strategy");
        try {
            c.deviation_strategy = parse_deviation_strategy(s);
        } catch (const PreconditionError& e) {
            throw ConfigError("deviation_strategy", e.what());
        }
    }
    if (j.contains("deviation")) {
        const auto& d = j.at("deviation");
        reject_unknown(d, {"d_omega1", "d_omega2", "d_T"}, "deviation.");
        read(d, "d_omega1", c.deviation.d_omega1, "deviation.d_omega1");
        read(d, "d_omega2", c.deviation.d_omega2, "deviation.d_omega2");
        read(d, "d_T", c.deviation.d_T, "deviation.d_T");
    }
    if (j.contains("stirap")) {
        const auto& s = j.at("stirap");
        reject_unknown(s, {"omega0_T", "tc_over_T", "t0_over_T"}, "stirap.");
        read(s, "omega0_T", c.stirap.omega0, "stirap.omega0_T");
        read(s, "tc_over_T", c.stirap.tc, "stirap.tc_over_T");
        read(s, "t0_over_T", c.stirap.t0, "stirap.t0_over_T");
    }
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        reject_unknown(s, {"fig4_points", "fig4_range", "fig6_points", "fig6_max", "fig6_omega0_T", "fig5_omega0_T"},
                       "sweep.");
        read(s, "fig4_points", c.fig4_points, "sweep.fig4_points");
        read(s, "fig4_range", c.fig4_range, "sweep.fig4_range");
        read(s, "fig6_points", c.fig6_points, "sweep.fig6_points");
        read(s, "fig6_max", c.fig6_max, "sweep.fig6_max");
        read(s, "fig6_omega0_T", c.fig6_omega0, "sweep.fig6_omega0_T");
        read(s, "fig5_omega0_T", c.fig5_omega0, "sweep.fig5_omega0_T");
    }
    c.stirap.mu = c.schedule.mu;
    c.validate();
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", "cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
    }
    return RunConfig::from_json(j);
}

}  // namespace reveng
