#pragma once

#include <string>
#include <vector>

namespace rqbm::cli {

/// Exit codes: 0 success, 2 bad input or configuration, 3 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

/// Runs the command line `rqbm <subcommand> [options]`.
int run(int argc, char** argv);

}  // namespace rqbm::cli
