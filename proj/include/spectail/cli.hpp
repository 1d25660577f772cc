#pragma once

#include <iosfwd>

namespace spectail::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerification = 1;
inline constexpr int kExitUsage = 2;

/// Parse and run one command line. Results go to `out` (or --out),
/// diagnostics to `err`. Returns kExitOk, kExitVerification when a
/// theorem-backed check fails, or kExitUsage for bad arguments,
/// configuration or I/O.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spectail::cli
