#pragma once

#include "reveng/dynamics.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace reveng {

/// 12 significant digits, the precision of every numeric CSV field.
std::string format_number(double v);

/// Comma-separated, header row, LF line endings.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    void row(const std::vector<double>& values);
    void row(const std::vector<std::string>& fields);

private:
    std::ofstream out_;
    std::size_t columns_;
};

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

/// `<file>.meta.json` next to an emitted file.
std::filesystem::path sidecar_path(const std::filesystem::path& file);
void write_sidecar(const std::filesystem::path& file, const nlohmann::json& metadata);

/// t_over_T, omega1_T, omega2_T on `points` uniform samples of [0, 1].
void write_pulse_csv(const std::filesystem::path& path, const PulseSet& ps, int points = 1001);

/// t_over_T, p1, p2, p3 and purity for Lindblad runs.
void write_trajectory_csv(const std::filesystem::path& path, const SimResult& r);

}  // namespace reveng
