#pragma once

#include <iosfwd>

namespace cforge::cli {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;      // unexpected internal error
inline constexpr int kUsage = 2;        // argument, parse and usage errors
inline constexpr int kInfeasible = 3;   // infeasible target or failed verification
inline constexpr int kResource = 4;     // capacity and numerical resource limits

/// Runs the contract-forge command line. JSON goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cforge::cli
