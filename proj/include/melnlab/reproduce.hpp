#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace melnlab {

// Outcome of a scripted scenario; artifacts are (file name, contents) pairs.
struct CaseReport {
    std::string id;
    bool pass = false;
    std::string statement;
    nlohmann::json details;
    std::vector<std::pair<std::string, std::string>> artifacts;
};

const std::vector<std::string>& reproduce_cases();
// Throws ConfigError for an unknown case id.
CaseReport run_case(const std::string& id, std::uint64_t seed = 1, int scan_configs = 1000);

}  // namespace melnlab
