#pragma once

// Command-line front end. Subcommands: constants, threshold, verify, weights,
// spectrum, report. Exit codes: 0 success, 1 verification failure,
// 2 usage or configuration error.

#include <iosfwd>
#include <string>
#include <vector>

namespace hyperhardy {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable overriding the default output directory (".").
inline constexpr const char* kOutDirVariable = "HYPERHARDY_OUT_DIR";

/// Runs the CLI on `args` (args[0] is the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hyperhardy
