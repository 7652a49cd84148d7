#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace torsionkit {

/// Exit codes shared by every subcommand.
inline constexpr int kExitProved = 0;
inline constexpr int kExitRefuted = 1;
inline constexpr int kExitUnknown = 2;
inline constexpr int kExitUsage = 64;

/// Runs the `torsionkit` command line. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace torsionkit
