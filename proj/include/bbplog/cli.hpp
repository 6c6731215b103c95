#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bbplog::cli {

// Exit codes (sysexits-style where one applies).
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUnsupported = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitDataError = 65;
inline constexpr int kExitNoInput = 66;
inline constexpr int kExitCantCreate = 73;
inline constexpr int kExitInternal = 70;

/// Runs one command line (args excludes the program name). Machine-readable
/// results go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bbplog::cli
