#pragma once

#include <iosfwd>
#include <string_view>

namespace peerturbo::cli {

inline constexpr std::string_view kToolName = "peerturbo";
inline constexpr std::string_view kToolVersion = "1.0.0";

/// Entry point shared by the executable and the tests. Subcommands: fluid,
/// mc, sweep, diff. Returns the process exit code; diagnostics go to `err`
/// as a single line.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace peerturbo::cli
