#ifndef RACAH_TOOLS_CLI_HPP
#define RACAH_TOOLS_CLI_HPP

// racah-kit command line: verify, racah-table, poly, spectrum.
//
// Exit codes: 0 pass, 1 verification or numeric failure, 2 configuration error.
// Defaults come from, in increasing priority: built-ins, RACAH_KIT_BACKEND,
// a key=value file given by --config, explicit flags.

#include <iosfwd>

namespace racah::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace racah::cli

#endif  // RACAH_TOOLS_CLI_HPP
