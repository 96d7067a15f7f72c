#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace melnlab {

constexpr const char* tool_version = "1.0.0";

// Inputs that fully determine a run.
struct RunManifest {
    std::string command;
    std::string config_path;
    double interval_lo = 0.0, interval_hi = 0.0;
    int grid_points = 0;
    bool grid_log = true;
    std::vector<int> orders;
    std::string family;
    std::string case_id;
    std::string out_dir;
    std::uint64_t seed = 0;
    std::string version = tool_version;
};

nlohmann::json to_json(const RunManifest& m);

// Indented JSON with every floating value at 17 significant digits; non-finite values become strings.
std::string dump_json(const nlohmann::json& j);

// Parses "A:B" with A < B.
std::pair<double, double> parse_interval(const std::string& s);
// Parses "N", "Nlog" or "Nlin" (N >= 2); returns (N, log spacing).
std::pair<int, bool> parse_grid(const std::string& s);
// Parses "1,2,4" or "1-3".
std::vector<int> parse_orders(const std::string& s);
std::vector<double> make_grid(double lo, double hi, int points, bool log_spacing);

// gnuplot script plotting columns 2.. of a CSV against column 1.
std::string gnuplot_script(const std::string& csv_name, const std::vector<std::string>& columns, bool log_x,
                           const std::string& title);

}  // namespace melnlab
