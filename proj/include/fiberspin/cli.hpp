// Command-line front end: solve | inviscid | bounds | sweep | boundary.
//
// Exit codes: 0 success, 1 usage or validation error, 2 solver
// non-convergence, 3 domain exit or missing boundary bracket,
// 130 sweep interrupted (partial results written).
#pragma once

#include <atomic>
#include <iosfwd>

namespace fiberspin::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNoConvergence = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitInterrupted = 130;

/// Set from a signal handler to stop a running sweep.
std::atomic<bool>& interrupt_flag();

/// Reports go to `out`, diagnostics to `err`. With --json, `out` receives
/// exactly one JSON document.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fiberspin::cli
