#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace jsqlab {

inline constexpr const char* kVersion = "jsqlab 1.0.0";
inline constexpr int kSchemaVersion = 1;

// Report envelope: schema version, tool version, fully-resolved config.
// nlohmann keeps object keys sorted, and doubles serialize shortest-round-trip
// with a 17-digit cap, so identical results give byte-identical files.
nlohmann::json make_report(const std::string& kind, const nlohmann::json& config,
                           const nlohmann::json& results);

void write_report(const nlohmann::json& report, const std::string& path);

// CSV with a leading '#' header comment line documenting the columns.
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows);

std::string format_double(double v);

}  // namespace jsqlab
