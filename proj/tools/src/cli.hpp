#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ess_sense::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitUsage = 2;

// Shortest decimal that reads back to the same double; '.' always.
std::string format_double(double v);

// Runs one subcommand. args excludes the program name. Results go to `out`
// unless --out names a file; diagnostics and warnings go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ess_sense::cli
