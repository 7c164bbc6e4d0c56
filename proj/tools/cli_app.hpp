#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace meboost::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs the `meboost` command line with `args` (program name excluded).
/// Normal output goes to `out`, diagnostics to `err`. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace meboost::cli
