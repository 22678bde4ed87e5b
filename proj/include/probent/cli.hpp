#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace probent {

// Exit codes of the probent tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitConfig = 2;  // bad flags, bad config, unknown suite
inline constexpr int kExitIo = 3;
inline constexpr int kExitViolation = 4;  // a property suite found a counterexample

/// Runs one subcommand (sweep, suite, classify, qnd-demo, periodicity).
/// Reports go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with `args` excluding the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace probent
