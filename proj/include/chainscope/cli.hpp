#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chainscope/report.hpp"

namespace chainscope::cli {

// Runs one command line (args excludes the program name). Exit codes: 0 ok,
// 1 I/O or internal failure, 2 usage error or invalid argument, 3 infeasible
// resolution, 4 precision exhausted.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

struct ScenarioOptions {
    std::optional<std::string> eps;      // single value or ladder
    std::optional<std::string> alpha;
    std::optional<std::size_t> cells;
    std::optional<int> length;
    std::optional<double> gap;
};

struct ScenarioOutcome {
    std::string id;
    Json result;
    std::string table;
    bool pass = false;
};

std::vector<std::string> scenario_ids();
ScenarioOutcome run_scenario(const std::string& id, const ScenarioOptions& options);

}  // namespace chainscope::cli
