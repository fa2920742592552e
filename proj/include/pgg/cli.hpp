#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pgg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs `pgg <subcommand> ...`; args exclude the program name.
/// Summaries go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pgg::cli
