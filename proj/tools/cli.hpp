#pragma once

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace newtondrag::cli {

/// Everything needed to reproduce a command's outputs. Embedded in every file
/// the tool writes.
struct RunConfig {
    std::string command;
    nlohmann::json domain;      // null when unused
    nlohmann::json constraint;
    nlohmann::json optimizer;
    nlohmann::json outputs = nlohmann::json::object();  // role -> path
    std::optional<std::uint64_t> seed;
    std::optional<double> mesh_h;
    std::vector<std::string> formats;
    nlohmann::json parameters = nlohmann::json::object();  // command-specific

    bool operator==(const RunConfig&) const = default;
};

nlohmann::json run_config_to_json(const RunConfig& config);
RunConfig run_config_from_json(const nlohmann::json& j);

const char* version();

/// Runs one command line (without the program name). Returns the exit code:
/// 0 success, 2 usage or parse error, 3 infeasible input, 4 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace newtondrag::cli
