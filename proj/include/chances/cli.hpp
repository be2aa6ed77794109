#pragma once

// Command-line front end. Every command prints exactly one JSON object
// {op, inputs, result, provenance} (or a text rendering of it) on success and
// nothing on standard output on failure.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace chances::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;

/// args excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct CommandInfo {
    std::string_view group;
    std::string_view name;
    std::string_view operation;  // library function the command runs
    std::string_view provenance;
};

/// One entry per leaf command.
const std::vector<CommandInfo>& command_table();

}  // namespace chances::cli
