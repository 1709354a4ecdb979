#pragma once

#include "reveng/config.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace reveng {

/// Pulse pair selected by `config.pulse_source`.
PulseSet resolve_pulses(const RunConfig& config);

/// What `sweep` should produce. Exactly one of table / fig is set.
struct SweepRequest {
    std::optional<std::string> table;  ///< I | II | III | IV | V
    std::optional<std::string> fig;    ///< 4a | 4b | 4c | 5 | 6
    int grid_x = 0;                    ///< 0: config default
    int grid_y = 0;
};

/// Parses "NxM" (or "N" for a square grid).
std::pair<int, int> parse_grid(const std::string& text);

// Each command validates the config, creates config.out_dir, writes its files plus
// sidecars and returns the list of data files written.
std::vector<std::filesystem::path> cmd_design(const RunConfig& config, std::ostream& log);
std::vector<std::filesystem::path> cmd_fit(const RunConfig& config, std::ostream& log);
std::vector<std::filesystem::path> cmd_simulate(const RunConfig& config, std::ostream& log);
std::vector<std::filesystem::path> cmd_sweep(const RunConfig& config, const SweepRequest& req,
                                             std::ostream& log);
std::vector<std::filesystem::path> cmd_stirap(const RunConfig& config, std::ostream& log);

struct CheckOutcome {
    std::string name;
    bool pass = false;
    double value = 0.0;  ///< measured quantity
    double limit = 0.0;  ///< threshold it is compared against
};

/// Invariant suite on the current config: unitarity, Hermiticity, elimination,
/// norm conservation, step halving, generator agreement and fidelity range.
std::vector<CheckOutcome> run_checks(const RunConfig& config);

}  // namespace reveng
