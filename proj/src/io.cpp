#include "reveng/io.hpp"

#include <cstdio>

namespace reveng {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);  // no "-0"
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary | std::ios::trunc), columns_(header.size()) {
    if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    if (fields.size() != columns_) throw std::logic_error("CSV row has the wrong number of fields");
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        out_ << fields[i];
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    std::vector<std::string> fields;
    fields.reserve(values.size());
    for (double v : values) fields.push_back(format_number(v));
    row(fields);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
}

std::filesystem::path sidecar_path(const std::filesystem::path& file) {
    return file.parent_path() / (file.filename().string() + ".meta.json");
}

void write_sidecar(const std::filesystem::path& file, const nlohmann::json& metadata) {
    write_json(sidecar_path(file), metadata);
}

void write_pulse_csv(const std::filesystem::path& path, const PulseSet& ps, int points) {
    CsvWriter csv(path, {"t_over_T", "omega1_T", "omega2_T"});
    for (int k = 0; k < points; ++k) {
        const double s = static_cast<double>(k) / (points - 1);
        csv.row(std::vector<double>{s, ps.omega1(s), ps.omega2(s)});
    }
}

void write_trajectory_csv(const std::filesystem::path& path, const SimResult& r) {
    std::vector<std::string> header{"t_over_T", "p1", "p2", "p3"};
    if (r.mixed()) header.push_back("purity");
    CsvWriter csv(path, header);
    for (std::size_t k = 0; k < r.grid.size(); ++k) {
        std::vector<double> row{r.grid[k], r.populations[k](0), r.populations[k](1), r.populations[k](2)};
        if (r.mixed()) row.push_back(r.purity[k]);
        csv.row(row);
    }
}

}  // namespace reveng
