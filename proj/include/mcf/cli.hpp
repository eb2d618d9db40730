#pragma once

#include <iosfwd>

namespace mcf {

inline constexpr const char* kVersion = "1.0.0";

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitStrict = 3;

// Entry point of the `mcf` tool; writes results to out and diagnostics to err.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mcf
