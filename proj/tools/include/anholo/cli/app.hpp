#pragma once

#include <iosfwd>

namespace anholo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Full command-line entry point. Artifacts without --out go to `out`;
/// errors are written to `err` as {"error": ..., "message": ...}.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace anholo::cli
