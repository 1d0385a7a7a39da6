#pragma once

#include <ostream>

namespace firesquad {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitSimulationAbort = 3;

// Entry point of `firesquad`: subcommands plan, simulate, bench and rooms.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace firesquad
