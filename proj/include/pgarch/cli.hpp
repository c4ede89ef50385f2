#pragma once

#include <iosfwd>

namespace pgarch::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFails = 2;
inline constexpr int kExitInconclusive = 3;
inline constexpr int kExitNotStationary = 4;
inline constexpr int kExitOverflow = 5;

/// Parses argv, dispatches the subcommand and returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pgarch::cli
