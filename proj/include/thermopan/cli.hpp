#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace thermopan::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

/// Parses and runs one `thermopan <subcommand> ...` invocation. Returns the
/// process exit code; diagnostics go to stderr.
int dispatch(int argc, const char* const* argv);
int dispatch(const std::vector<std::string>& args);

/// Names of all subcommands, in help order.
const std::vector<std::string>& subcommand_names();

/// Closest candidate by edit distance, or empty when nothing is close.
std::string suggest(std::string_view word, const std::vector<std::string>& candidates);

std::size_t edit_distance(std::string_view a, std::string_view b);

}  // namespace thermopan::cli
