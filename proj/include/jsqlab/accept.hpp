#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace jsqlab {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    std::uint64_t seed = 20240811;
    bool verbose = true;
};

struct AcceptanceReport {
    std::vector<CriterionResult> criteria;
    bool all_pass() const {
        for (const auto& c : criteria)
            if (!c.pass) return false;
        return !criteria.empty();
    }
    nlohmann::json to_json() const;
};

// Runs every acceptance criterion at its pinned tolerance, printing one
// pass/fail line per criterion to `out`.
AcceptanceReport run_acceptance(const AcceptanceOptions& opts, std::ostream& out);

}  // namespace jsqlab
