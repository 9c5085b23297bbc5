#pragma once

#include <iosfwd>

namespace cema {

inline constexpr int kExitFound = 0;
inline constexpr int kExitNotFound = 1;
inline constexpr int kExitError = 2;
inline constexpr int kExitUsage = 64;

// Entry point of the command-line tool. Output goes to out/err so the
// commands can be driven in-process.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cema
