#pragma once

#include "reveng/sweeps.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace reveng {

enum class PulseSource { Exact, Fitted, PaperFitted, Stirap };

std::string to_string(PulseSource p);
PulseSource parse_pulse_source(const std::string& name);

/// Invalid configuration; `field()` names the offending key.
class ConfigError : public PreconditionError {
public:
    ConfigError(std::string field, const std::string& message);
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Everything a CLI run depends on. Rates are stored dimensionless (Omega*T, Gamma*T).
struct RunConfig {
    ScheduleParams schedule;
    int steps = 20000;
    int samples = 1001;
    PulseSource pulse_source = PulseSource::PaperFitted;
    DeviationStrategy deviation_strategy = DeviationStrategy::PulseArea;
    DeviationSpec deviation;
    std::string out_dir = "out";
    unsigned threads = 0;

    StirapParams stirap;        ///< omega0 is Omega0*T
    LindbladParams lindblad;    ///< Gamma*T

    int fig4_points = 41;
    double fig4_range = 0.10;
    int fig6_points = 21;
    double fig6_max = 0.10;     ///< max Gamma/Omega0 on both axes
    double fig6_omega0 = 3.154; ///< Omega0*T used to convert Gamma/Omega0
    std::vector<double> fig5_omega0;

    RunConfig();

    /// Throws ConfigError naming the first invalid field.
    void validate() const;
    nlohmann::json to_json() const;
    static RunConfig from_json(const nlohmann::json& j);
};

RunConfig load_config(const std::filesystem::path& path);

}  // namespace reveng
