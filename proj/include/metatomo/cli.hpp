#pragma once

#include <iosfwd>

namespace metatomo::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitNumerical = 3;

/// Entry point of the command-line tool. Reports go to `out`, diagnostics
/// to `err`; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace metatomo::cli
