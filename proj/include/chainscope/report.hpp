#pragma once

// Report emission: JSON with a fixed number format, aligned text tables, the
// shared ladder grammar, and the run manifest embedded in every report.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace chainscope {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

// Serializes with doubles printed as %.17g, keys in insertion order, two
// space indent. Non-finite doubles become null.
std::string dump_json(const Json& j);

// "start:end:geometric:count", "start:end:linear:count", or a comma
// separated list. Geometric/linear ladders include both ends.
std::vector<double> parse_ladder(const std::string& text);

std::string format_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);
std::string fmt_double(double v, int precision = 6);

struct RunManifest {
    std::string command;
    std::map<std::string, std::string> system;   // config keys
    std::string system_description;
    std::map<std::string, std::string> parameters;
    std::map<std::string, std::vector<double>> ladders;
    std::optional<double> rho_fraction;
    std::optional<std::size_t> max_cells;
    std::optional<std::uint64_t> seed;
    std::vector<std::pair<std::string, double>> stage_seconds;  // emitted only when timings are on
    bool timings = false;

    Json to_json() const;
};

}  // namespace chainscope
