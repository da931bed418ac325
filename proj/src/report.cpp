#include "jsqlab/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace jsqlab {

nlohmann::json make_report(const std::string& kind, const nlohmann::json& config,
                           const nlohmann::json& results) {
    nlohmann::json j;
    j["kind"] = kind;
    j["schema_version"] = kSchemaVersion;
    j["version"] = kVersion;
    j["config"] = config;
    j["results"] = results;
    return j;
}

void write_report(const nlohmann::json& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_report: cannot open " + path);
    out << report.dump(2) << "\n";
    if (!out) throw std::runtime_error("write_report: write failed for " + path);
}

std::string format_double(double v) {
    // shortest round-trip, capped at 17 significant digits
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        double back = std::strtod(buf, nullptr);
        if (back == v) return buf;
    }
    return buf;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    out << "# " << header << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ",";
            out << format_double(row[i]);
        }
        out << "\n";
    }
    if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

}  // namespace jsqlab
